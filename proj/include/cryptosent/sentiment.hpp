#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "cryptosent/corpus.hpp"
#include "cryptosent/lexicon.hpp"
#include "cryptosent/neural.hpp"

namespace cryptosent {

struct TrainConfig {
    int epochs = 20;
    int batch_size = 32;
    double lr = 0.05;
    double clip = 5.0;
    std::size_t max_len = kDefaultMaxLen;
    std::uint64_t seed = 42;
    bool shuffle = true;
    int embed_dim = 32;
    int hidden_dim = 64;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;  // 1-based
    double loss = 0.0;
    double accuracy = 0.0;
};

/// Metrics are measured on the full training set after each epoch's updates.
struct TrainHistory {
    std::vector<EpochStats> epochs;
    std::size_t skipped_empty = 0;  // posts that encode to zero tokens
};

struct TrainResult {
    SentimentModel model;
    TrainHistory history;
};

/// Seeded minibatch SGD. Epoch k shuffles with seed (cfg.seed + k).
TrainResult train(const Corpus& corpus, const Lexicon& lexicon, const TrainConfig& cfg);

/// Writes "epoch,loss,accuracy" CSV.
void save_history(const std::filesystem::path& path, const TrainHistory& history);

struct SentimentPrediction {
    SentimentLabel label = SentimentLabel::Neutral;
    std::optional<std::array<double, kNumClasses>> scores;  // absent when empty
    bool empty = false;
};

/// argmax over the three scores; any tie for the maximum gives Neutral.
SentimentLabel argmax_label(const Vector& scores);

SentimentPrediction predict_encoded(const SentimentModel& model, const EncodedPost& post);
SentimentPrediction predict_post(const SentimentModel& model, const Lexicon& lexicon, std::string_view text,
                                 std::size_t max_len);

/// Fraction of non-empty labeled posts whose predicted label matches.
double accuracy(const SentimentModel& model, std::span<const LabeledPost> examples);

}  // namespace cryptosent
