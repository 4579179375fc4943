#pragma once

#include "cryptosent/lexicon.hpp"
#include "cryptosent/sentiment.hpp"
#include "cryptosent/synthkit.hpp"

namespace cryptosent::fixtures {

// 30 noiseless posts on a single day.
inline SynthConfig toy_synth_config() {
    SynthConfig cfg;
    cfg.n_days = 1;
    cfg.posts_per_day = 30;
    cfg.label_noise = 0.0;
    return cfg;
}

// Every generated word, indexed against the corpus.
inline Lexicon vocabulary_lexicon(const SynthCorpus& s) {
    Lexicon lex;
    for (const auto& w : s.vocabulary.positive) lex.add({w, SentimentLabel::Positive, 0, std::nullopt});
    for (const auto& w : s.vocabulary.negative) lex.add({w, SentimentLabel::Negative, 0, std::nullopt});
    for (const auto& w : s.vocabulary.neutral) lex.add({w, SentimentLabel::Neutral, 0, std::nullopt});
    return assign_indices(lex, s.corpus);
}

inline TrainConfig overfit_config() {
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.batch_size = 5;
    cfg.lr = 0.3;
    cfg.embed_dim = 8;
    cfg.hidden_dim = 16;
    cfg.seed = 1;
    return cfg;
}

}  // namespace cryptosent::fixtures
