#include <gtest/gtest.h>

#include "cryptosent/encoder.hpp"
#include "cryptosent/error.hpp"

using namespace cryptosent;
using L = SentimentLabel;

namespace {

Lexicon indexed(std::initializer_list<const char*> surfaces) {
    Lexicon lex;
    for (const char* s : surfaces) lex.add({s, L::Neutral, 0, std::nullopt});
    return assign_indices(lex, Corpus{});
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

}  // namespace

TEST(Encoder, LongestMatch) {
    EXPECT_EQ(surfaces(tokenize("新高下车", indexed({"新高", "下车"}))), (std::vector<std::string>{"新高", "下车"}));
    EXPECT_EQ(surfaces(tokenize("新高", indexed({"新", "新高"}))), (std::vector<std::string>{"新高"}));
    EXPECT_TRUE(tokenize("！！", indexed({"新高"})).empty());
}

TEST(Encoder, OovAndDroppedPieces) {
    const Lexicon lex = indexed({"新高"});
    const auto tokens = tokenize("新高 了！x", lex);
    ASSERT_EQ(tokens.size(), 3u);
    EXPECT_TRUE(tokens[0].known);
    EXPECT_EQ(tokens[1].surface, "了");
    EXPECT_FALSE(tokens[1].known);
    EXPECT_EQ(tokens[1].index, Lexicon::kOov);
    EXPECT_EQ(tokens[2].surface, "x");

    std::string joined;
    for (const auto& p : segment("新高 了！x", lex)) joined += p.text;
    EXPECT_EQ(joined, "新高 了！x");
}

TEST(Encoder, PadsAndTruncates) {
    Lexicon lex;
    lex.add({"甲", L::Neutral, 0, std::nullopt});
    lex.add({"乙", L::Neutral, 0, std::nullopt});
    lex.add({"丙", L::Neutral, 0, std::nullopt});
    lex.add({"丁", L::Neutral, 0, std::nullopt});
    lex.add({"戊", L::Neutral, 0, std::nullopt});
    lex.add({"己", L::Neutral, 0, std::nullopt});
    // Frequencies pin 甲 to index 5 and 乙 to index 7.
    const Corpus corpus({{"a", 0, "己己己己己己戊戊戊戊戊丁丁丁丁甲甲甲丙丙乙", std::nullopt, std::nullopt}});
    const Lexicon ix = assign_indices(lex, corpus);
    ASSERT_EQ(ix.find("甲")->index, 5);
    ASSERT_EQ(ix.find("乙")->index, 7);

    const EncodedPost e = encode("甲乙", ix, 4);
    EXPECT_EQ(e.indices, (std::vector<std::int32_t>{5, 7, 0, 0}));
    EXPECT_EQ(e.length, 2u);

    const EncodedPost t = encode("甲乙丙丁戊己", ix, 4);
    EXPECT_EQ(t.length, 4u);
    EXPECT_EQ(t.indices, (std::vector<std::int32_t>{5, 7, 6, 4}));

    const EncodedPost empty = encode("", ix, 4);
    EXPECT_EQ(empty.indices, (std::vector<std::int32_t>{0, 0, 0, 0}));
    EXPECT_EQ(empty.length, 0u);
}

TEST(Encoder, Preconditions) {
    Lexicon raw;
    raw.add({"新高", L::Positive, 0, std::nullopt});
    EXPECT_THROW(encode("新高", raw, 4), ConfigError);
    EXPECT_THROW(encode("新高", indexed({"新高"}), 0), ConfigError);
}

TEST(Encoder, EncodePostCarriesLabel) {
    const Post p{"a", 0, "新高", L::Positive, std::nullopt};
    const EncodedPost e = encode_post(p, indexed({"新高"}), 3);
    EXPECT_EQ(e.label, L::Positive);
    EXPECT_EQ(e.indices, (std::vector<std::int32_t>{2, 0, 0}));
}
