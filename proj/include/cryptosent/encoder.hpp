#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosent/corpus.hpp"
#include "cryptosent/lexicon.hpp"

namespace cryptosent {

inline constexpr std::size_t kDefaultMaxLen = 64;

enum class PieceKind { Known, Oov, Dropped };

/// One step of the dictionary scan. Concatenating every piece's text in order
/// reproduces the scanned input exactly.
struct Piece {
    std::string text;
    PieceKind kind;
    int index;  // entry index for Known (or -1 if unindexed), kOov for Oov, -1 for Dropped
};

struct Token {
    std::string surface;
    bool known;
    int index;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Greedy longest-match scan, keeping dropped whitespace/punctuation pieces.
std::vector<Piece> segment(std::string_view text, const Lexicon& lexicon);

/// The non-dropped pieces of segment().
std::vector<Token> tokenize(std::string_view text, const Lexicon& lexicon);

struct EncodedPost {
    std::vector<std::int32_t> indices;  // capacity max_len, PAD-filled past `length`
    std::size_t length = 0;
    std::optional<SentimentLabel> label;

    std::size_t capacity() const noexcept { return indices.size(); }
    friend bool operator==(const EncodedPost&, const EncodedPost&) = default;
};

/// Head-truncates to max_len tokens and right-pads with PAD. Requires an
/// indexed lexicon; never fails on text content.
EncodedPost encode(std::string_view text, const Lexicon& lexicon, std::size_t max_len);
EncodedPost encode_post(const Post& post, const Lexicon& lexicon, std::size_t max_len);

}  // namespace cryptosent
