#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosent/corpus.hpp"

namespace cryptosent {

struct LexiconEntry {
    std::string surface;
    SentimentLabel polarity = SentimentLabel::Neutral;
    std::size_t frequency = 0;
    std::optional<int> index;  // >= 2 once assigned

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct Seed {
    std::string surface;
    SentimentLabel polarity;
};

/// Knobs for seed-word bootstrapping. Posts with |rank| >= rank_threshold are
/// the "highly polar" posts that new words are harvested from.
struct BootstrapConfig {
    int rank_threshold = 2;
    int min_candidate_freq = 3;
    int max_ngram_len = 4;  // code points
    int max_new_per_iter = 20;
    int max_iters = 5;
    double purity_min = 0.8;

    void validate() const;
};

/// Crypto sentiment dictionary. Index 0 is PAD and 1 is OOV; entries take
/// 2..size()+1 once indexed.
class Lexicon {
public:
    static constexpr int kPad = 0;
    static constexpr int kOov = 1;
    static constexpr int kFirstIndex = 2;

    Lexicon() = default;

    /// Throws DataError on an invalid or duplicate surface.
    void add(LexiconEntry entry);

    const LexiconEntry* find(std::string_view surface) const;
    bool contains(std::string_view surface) const { return find(surface) != nullptr; }

    /// Insertion order, or index order after indexing.
    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    bool indexed() const;
    /// Embedding rows required by a model over this lexicon (entries + PAD + OOV).
    int vocab_size() const { return static_cast<int>(entries_.size()) + kFirstIndex; }
    std::size_t max_surface_length() const noexcept { return max_surface_cps_; }

    friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.entries_ == b.entries_; }

private:
    friend Lexicon assign_indices(const Lexicon& lexicon, const Corpus& corpus);

    std::vector<LexiconEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> by_surface_;
    std::size_t max_surface_cps_ = 0;
};

struct BootstrapTrace {
    std::vector<std::size_t> added_per_iteration;
    bool converged = false;  // stopped on an iteration that added nothing
};

/// Seeds plus bootstrapped polar words, indexed by corpus frequency.
Lexicon build_lexicon(const Corpus& corpus, const std::vector<Seed>& seeds,
                      const BootstrapConfig& cfg, BootstrapTrace* trace = nullptr);

/// One harvesting round: character n-grams from polar posts that are frequent
/// and polarity-pure enough, not already in the lexicon. Ordered by descending
/// polar frequency, ties by code-point order; `frequency` holds the polar count.
std::vector<LexiconEntry> bootstrap_iteration(const Corpus& corpus, const Lexicon& lexicon,
                                              const BootstrapConfig& cfg);

/// Recounts each entry as emitted by the tokenizer over the corpus, then
/// numbers entries from 2 by descending frequency (ties: code-point order).
Lexicon assign_indices(const Lexicon& lexicon, const Corpus& corpus);

void write_lexicon(std::ostream& out, const Lexicon& lexicon);
Lexicon parse_lexicon(std::istream& in);
void save_lexicon(const std::filesystem::path& path, const Lexicon& lexicon);
Lexicon load_lexicon(const std::filesystem::path& path);

/// Seed file: "surface<TAB>polarity" per line, '#' comments allowed.
std::vector<Seed> parse_seeds(std::istream& in);
std::vector<Seed> load_seeds(const std::filesystem::path& path);
void save_seeds(const std::filesystem::path& path, const std::vector<Seed>& seeds);

}  // namespace cryptosent
