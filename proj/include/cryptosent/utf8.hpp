#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cryptosent::utf8 {

/// One decoded unit of a byte string. Invalid bytes decode to a unit of
/// width 1 with `valid == false` so that scanning is total.
struct Unit {
    char32_t code_point;
    std::size_t offset;
    std::size_t width;
    bool valid;
};

Unit decode_at(std::string_view text, std::size_t offset);
std::vector<Unit> decode(std::string_view text);

bool is_valid(std::string_view text);
std::size_t length(std::string_view text);  // in code points

void append(std::string& out, char32_t code_point);

bool is_whitespace(char32_t cp);
/// Unicode punctuation and common symbol ranges (ASCII, Latin-1, general
/// punctuation, CJK symbols, fullwidth forms).
bool is_punctuation(char32_t cp);
inline bool is_separator(char32_t cp) { return is_whitespace(cp) || is_punctuation(cp); }

std::string_view trim(std::string_view text);

}  // namespace cryptosent::utf8
