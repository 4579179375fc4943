#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cryptosent/corpus.hpp"
#include "cryptosent/lexicon.hpp"
#include "cryptosent/market.hpp"

namespace cryptosent {

/// Synthetic world in which day-level sentiment drives the next day's price.
struct SynthConfig {
    std::uint64_t seed = 7;
    int n_days = 40;
    int posts_per_day = 30;
    int vocab_pos = 12;
    int vocab_neg = 12;
    int vocab_neu = 12;
    double label_noise = 0.1;
    double sentiment_strength = 0.05;
    double price_noise = 0.01;
    /// Each day leans bullish or bearish (half the days each, shuffled):
    /// P(dominant class) - P(opposite class). Neutral posts take 0.2.
    double mood_bias = 0.7;
    /// Positive and negative words handed out as seeds (all neutral words are seeds).
    int seeds_per_polarity = 3;

    void validate() const;
};

struct SynthVocabulary {
    std::vector<std::string> positive;
    std::vector<std::string> negative;
    std::vector<std::string> neutral;
};

struct SynthCorpus {
    Corpus corpus;
    std::vector<Seed> seeds;
    SynthVocabulary vocabulary;
};

/// Disjoint 2-character vocabularies; every post draws a strict majority of
/// its 3-10 tokens from its class vocabulary. Polar labels get rank +/-2.
SynthCorpus synth_corpus(const SynthConfig& cfg);

/// Closes for days min_day..max_day+1 starting at 100; the return into day d+1
/// is sentiment_strength * (pos - neg) / n_d over day d's labels plus
/// Gaussian noise with standard deviation price_noise.
PriceSeries synth_market(const Corpus& corpus, const SynthConfig& cfg);

}  // namespace cryptosent
