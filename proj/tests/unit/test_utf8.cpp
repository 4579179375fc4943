#include <gtest/gtest.h>

#include "cryptosent/utf8.hpp"

using namespace cryptosent;

TEST(Utf8, DecodesMixedWidths) {
    const std::string text = "a新\xF0\x9F\x9A\x80";  // a, U+65B0, U+1F680
    const auto units = utf8::decode(text);
    ASSERT_EQ(units.size(), 3u);
    EXPECT_EQ(units[0].code_point, U'a');
    EXPECT_EQ(units[1].code_point, U'新');
    EXPECT_EQ(units[1].width, 3u);
    EXPECT_EQ(units[2].code_point, 0x1F680u);
    EXPECT_TRUE(utf8::is_valid(text));
    EXPECT_EQ(utf8::length(text), 3u);
}

TEST(Utf8, InvalidBytesDecodeAsSingleUnits) {
    const std::string text = "x\xC3\x28y\xED\xA0\x80";  // truncated sequence, encoded surrogate
    EXPECT_FALSE(utf8::is_valid(text));
    const auto units = utf8::decode(text);
    std::size_t covered = 0;
    for (const auto& u : units) covered += u.width;
    EXPECT_EQ(covered, text.size());
}

TEST(Utf8, AppendRoundTrips) {
    for (char32_t cp : {U'A', U'é', U'韭', char32_t{0x1F4B0}}) {
        std::string s;
        utf8::append(s, cp);
        const auto units = utf8::decode(s);
        ASSERT_EQ(units.size(), 1u);
        EXPECT_EQ(units[0].code_point, cp);
    }
}

TEST(Utf8, ClassifiesCjkPunctuationAndSpaces) {
    EXPECT_TRUE(utf8::is_punctuation(U'！'));
    EXPECT_TRUE(utf8::is_punctuation(U'，'));
    EXPECT_TRUE(utf8::is_punctuation(U'。'));
    EXPECT_TRUE(utf8::is_punctuation(U'?'));
    EXPECT_TRUE(utf8::is_whitespace(U'　'));
    EXPECT_FALSE(utf8::is_separator(U'新'));
    EXPECT_FALSE(utf8::is_separator(U'7'));
}

TEST(Utf8, TrimStripsUnicodeWhitespace) {
    EXPECT_EQ(utf8::trim("　 新高 \t"), "新高");
    EXPECT_EQ(utf8::trim("   "), "");
}
