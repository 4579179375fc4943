#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosent/lexicon.hpp"
#include "cryptosent/market.hpp"
#include "cryptosent/sentiment.hpp"
#include "cryptosent/synthkit.hpp"

namespace cryptosent {

/// The shared key = value schema used by every subcommand.
struct PipelineConfig {
    std::filesystem::path corpus = "corpus.tsv";
    std::filesystem::path prices = "prices.csv";
    std::filesystem::path seeds = "seeds.tsv";
    std::filesystem::path lexicon = "lexicon.tsv";
    std::filesystem::path checkpoint = "model.ckpt";
    std::filesystem::path history = "history.csv";
    std::filesystem::path sentiment_predictions = "sentiment.tsv";
    std::filesystem::path trend_predictions = "trend.csv";
    std::filesystem::path ar_predictions = "ar.csv";
    std::filesystem::path report = "report.txt";
    std::filesystem::path report_json = "report.json";

    TrainConfig train;
    BootstrapConfig bootstrap;
    SynthConfig synth;

    int train_days = 7;
    int ar_order = kDefaultArOrder;
    ReturnMode return_mode = ReturnMode::Log;
    std::optional<int> boundary_day;  // first test day; derived from the corpus split if unset
    std::optional<std::string> text;  // predict-sentiment on a single string

    int gc_vocab = 10;
    int gc_embed = 3;
    int gc_hidden = 4;
    int gc_length = 5;
    double gc_eps = 1e-5;
    double gc_tol = 1e-4;

    /// Throws ConfigError for an unknown key or an unparsable value.
    void set(std::string_view key, std::string_view value);
    /// Every recognised key, in canonical order.
    static const std::vector<std::string>& keys();

    /// Non-path settings as sorted "key = value" lines.
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), hex encoded.
    std::string digest() const;
};

PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);
/// Applies "key = value" lines from `in` on top of `cfg`.
void apply_config(PipelineConfig& cfg, std::istream& in);

/// Relative paths in an existing config resolved against `dir`.
void rebase_paths(PipelineConfig& cfg, const std::filesystem::path& dir);

inline constexpr const char* kCommands[] = {"build-lexicon", "encode",   "train",    "predict-sentiment",
                                            "predict-trend", "baseline-ar", "evaluate", "gradcheck", "synth"};

/// Runs one subcommand. Returns the process exit status; failures print a
/// single "error: code=<n> kind=<kind> message=<text>" line to `err`.
int run(std::string_view command, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

/// Same as run() but lets errors propagate as exceptions.
void run_or_throw(std::string_view command, const PipelineConfig& cfg, std::ostream& out);

}  // namespace cryptosent
