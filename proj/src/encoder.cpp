#include "cryptosent/encoder.hpp"

#include <algorithm>

#include "cryptosent/error.hpp"
#include "cryptosent/utf8.hpp"

namespace cryptosent {

std::vector<Piece> segment(std::string_view text, const Lexicon& lexicon) {
    const auto units = utf8::decode(text);
    const std::size_t longest = lexicon.max_surface_length();
    std::vector<Piece> pieces;
    pieces.reserve(units.size());

    for (std::size_t pos = 0; pos < units.size();) {
        const std::size_t span = std::min(longest, units.size() - pos);
        bool matched = false;
        for (std::size_t n = span; n >= 1; --n) {
            const std::size_t begin = units[pos].offset;
            const std::size_t end = units[pos + n - 1].offset + units[pos + n - 1].width;
            const std::string_view candidate = text.substr(begin, end - begin);
            if (const LexiconEntry* entry = lexicon.find(candidate)) {
                pieces.push_back({std::string(candidate), PieceKind::Known, entry->index.value_or(-1)});
                pos += n;
                matched = true;
                break;
            }
        }
        if (matched) continue;

        const utf8::Unit& u = units[pos];
        std::string piece(text.substr(u.offset, u.width));
        if (u.valid && utf8::is_separator(u.code_point))
            pieces.push_back({std::move(piece), PieceKind::Dropped, -1});
        else
            pieces.push_back({std::move(piece), PieceKind::Oov, Lexicon::kOov});
        ++pos;
    }
    return pieces;
}

std::vector<Token> tokenize(std::string_view text, const Lexicon& lexicon) {
    std::vector<Token> tokens;
    for (Piece& p : segment(text, lexicon)) {
        if (p.kind == PieceKind::Dropped) continue;
        tokens.push_back({std::move(p.text), p.kind == PieceKind::Known, p.index});
    }
    return tokens;
}

EncodedPost encode(std::string_view text, const Lexicon& lexicon, std::size_t max_len) {
    if (max_len < 1) throw ConfigError("max_len must be >= 1");
    if (!lexicon.indexed()) throw ConfigError("encode requires an indexed lexicon");

    EncodedPost out;
    out.indices.assign(max_len, Lexicon::kPad);
    for (const Token& t : tokenize(text, lexicon)) {
        if (out.length == max_len) break;
        out.indices[out.length++] = t.index;
    }
    return out;
}

EncodedPost encode_post(const Post& post, const Lexicon& lexicon, std::size_t max_len) {
    EncodedPost out = encode(post.text, lexicon, max_len);
    out.label = post.label;
    return out;
}

}  // namespace cryptosent
