#include "cryptosent/utf8.hpp"

namespace cryptosent::utf8 {

namespace {

bool is_continuation(unsigned char byte) { return (byte & 0xC0U) == 0x80U; }

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

}  // namespace

Unit decode_at(std::string_view text, std::size_t offset) {
    const auto lead = static_cast<unsigned char>(text[offset]);
    const Unit invalid{lead, offset, 1, false};
    if (lead < 0x80U) return {lead, offset, 1, true};

    std::size_t width = 0;
    char32_t cp = 0;
    char32_t min_cp = 0;
    if ((lead & 0xE0U) == 0xC0U) {
        width = 2;
        cp = lead & 0x1FU;
        min_cp = 0x80;
    } else if ((lead & 0xF0U) == 0xE0U) {
        width = 3;
        cp = lead & 0x0FU;
        min_cp = 0x800;
    } else if ((lead & 0xF8U) == 0xF0U) {
        width = 4;
        cp = lead & 0x07U;
        min_cp = 0x10000;
    } else {
        return invalid;
    }
    if (offset + width > text.size()) return invalid;
    for (std::size_t k = 1; k < width; ++k) {
        const auto byte = static_cast<unsigned char>(text[offset + k]);
        if (!is_continuation(byte)) return invalid;
        cp = (cp << 6U) | (byte & 0x3FU);
    }
    if (cp < min_cp || cp > 0x10FFFF || in(cp, 0xD800, 0xDFFF)) return invalid;
    return {cp, offset, width, true};
}

std::vector<Unit> decode(std::string_view text) {
    std::vector<Unit> units;
    units.reserve(text.size());
    for (std::size_t pos = 0; pos < text.size();) {
        const Unit u = decode_at(text, pos);
        units.push_back(u);
        pos += u.width;
    }
    return units;
}

bool is_valid(std::string_view text) {
    for (std::size_t pos = 0; pos < text.size();) {
        const Unit u = decode_at(text, pos);
        if (!u.valid) return false;
        pos += u.width;
    }
    return true;
}

std::size_t length(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < text.size(); ++n) pos += decode_at(text, pos).width;
    return n;
}

void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0U | (cp >> 6U)));
        out.push_back(static_cast<char>(0x80U | (cp & 0x3FU)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0U | (cp >> 12U)));
        out.push_back(static_cast<char>(0x80U | ((cp >> 6U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80U | (cp & 0x3FU)));
    } else {
        out.push_back(static_cast<char>(0xF0U | (cp >> 18U)));
        out.push_back(static_cast<char>(0x80U | ((cp >> 12U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80U | ((cp >> 6U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80U | (cp & 0x3FU)));
    }
}

bool is_whitespace(char32_t cp) {
    return in(cp, 0x09, 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
           in(cp, 0x2000, 0x200B) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
           cp == 0x205F || cp == 0x3000 || cp == 0xFEFF;
}

bool is_punctuation(char32_t cp) {
    // ASCII
    if (in(cp, 0x21, 0x2F) || in(cp, 0x3A, 0x40) || in(cp, 0x5B, 0x60) || in(cp, 0x7B, 0x7E))
        return true;
    // Latin-1 punctuation and symbols
    if (in(cp, 0xA1, 0xBF) || cp == 0xD7 || cp == 0xF7) return true;
    // General punctuation, supplemental punctuation
    if (in(cp, 0x2010, 0x2027) || in(cp, 0x2030, 0x205E) || in(cp, 0x2E00, 0x2E7F)) return true;
    // CJK symbols and punctuation
    if (in(cp, 0x3001, 0x3003) || in(cp, 0x3008, 0x3011) || in(cp, 0x3014, 0x301F) ||
        cp == 0x3030 || cp == 0x303D || cp == 0x30FB)
        return true;
    // Vertical, compatibility and small forms
    if (in(cp, 0xFE10, 0xFE19) || in(cp, 0xFE30, 0xFE6B)) return true;
    // Fullwidth ASCII punctuation, halfwidth CJK punctuation
    return in(cp, 0xFF01, 0xFF0F) || in(cp, 0xFF1A, 0xFF20) || in(cp, 0xFF3B, 0xFF40) ||
           in(cp, 0xFF5B, 0xFF65);
}

std::string_view trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end) {
        const Unit u = decode_at(text, begin);
        if (!u.valid || !is_whitespace(u.code_point)) break;
        begin += u.width;
    }
    // Trailing scan walks whole units from `begin` so multi-byte widths stay correct.
    std::size_t last_non_ws = begin;
    for (std::size_t pos = begin; pos < end;) {
        const Unit u = decode_at(text, pos);
        pos += u.width;
        if (!u.valid || !is_whitespace(u.code_point)) last_non_ws = pos;
    }
    return text.substr(begin, last_non_ws - begin);
}

}  // namespace cryptosent::utf8
