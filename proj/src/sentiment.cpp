#include "cryptosent/sentiment.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "cryptosent/error.hpp"

namespace cryptosent {

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(lr > 0.0)) throw ConfigError("lr must be positive");
    if (!(clip > 0.0)) throw ConfigError("clip must be positive");
    if (max_len < 1) throw ConfigError("max_len must be >= 1");
    if (embed_dim < 1 || hidden_dim < 1) throw ConfigError("embed_dim and hidden_dim must be >= 1");
}

SentimentLabel argmax_label(const Vector& scores) {
    Eigen::Index best = 0;
    const double top = scores.maxCoeff(&best);
    const auto ties = (scores.array() == top).count();
    return ties > 1 ? SentimentLabel::Neutral : class_label(static_cast<int>(best));
}

SentimentPrediction predict_encoded(const SentimentModel& model, const EncodedPost& post) {
    SentimentPrediction out;
    if (post.length == 0) {
        out.empty = true;
        return out;
    }
    const ForwardTrace trace = forward(model, post);
    out.label = argmax_label(trace.scores);
    out.scores = std::array<double, kNumClasses>{trace.scores[0], trace.scores[1], trace.scores[2]};
    return out;
}

SentimentPrediction predict_post(const SentimentModel& model, const Lexicon& lexicon, std::string_view text,
                                 std::size_t max_len) {
    if (model.dims.vocab != lexicon.vocab_size())
        throw DataError("model vocabulary (" + std::to_string(model.dims.vocab) + ") does not match lexicon (" +
                        std::to_string(lexicon.vocab_size()) + ")");
    return predict_encoded(model, encode(text, lexicon, max_len));
}

double accuracy(const SentimentModel& model, std::span<const LabeledPost> examples) {
    std::size_t correct = 0;
    std::size_t seen = 0;
    for (const LabeledPost& ex : examples) {
        if (ex.input.length == 0) continue;
        ++seen;
        if (argmax_label(forward(model, ex.input).scores) == ex.label) ++correct;
    }
    return seen == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(seen);
}

TrainResult train(const Corpus& corpus, const Lexicon& lexicon, const TrainConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw DataError("cannot train on an empty corpus");
    if (!lexicon.indexed()) throw ConfigError("training requires an indexed lexicon");

    TrainResult result;
    std::vector<LabeledPost> examples;
    examples.reserve(corpus.size());
    for (const Post& post : corpus) {
        if (!post.label) throw DataError("training post " + post.id + " is unlabeled");
        EncodedPost encoded = encode_post(post, lexicon, cfg.max_len);
        if (encoded.length == 0) {
            ++result.history.skipped_empty;
            continue;
        }
        examples.push_back({std::move(encoded), *post.label});
    }
    if (examples.empty()) throw DataError("no training post encodes to a non-empty sequence");

    const ModelDims dims{lexicon.vocab_size(), cfg.embed_dim, cfg.hidden_dim, kNumClasses};
    result.model = init_model(dims, cfg.seed);

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<LabeledPost> batch;
    const auto batch_size = static_cast<std::size_t>(cfg.batch_size);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(epoch));
            std::shuffle(order.begin(), order.end(), rng);
        }
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            batch.clear();
            const std::size_t stop = std::min(order.size(), start + batch_size);
            for (std::size_t k = start; k < stop; ++k) batch.push_back(examples[order[k]]);
            const Gradients grads = backward(result.model, batch);
            apply_sgd(result.model, grads, cfg.lr, cfg.clip);
        }

        double total_loss = 0.0;
        std::size_t correct = 0;
        for (const LabeledPost& ex : examples) {
            const Vector scores = forward(result.model, ex.input).scores;
            total_loss += loss(scores, ex.label);
            if (argmax_label(scores) == ex.label) ++correct;
        }
        const auto n = static_cast<double>(examples.size());
        result.history.epochs.push_back({epoch, total_loss / n, static_cast<double>(correct) / n});
    }
    return result;
}

void save_history(const std::filesystem::path& path, const TrainHistory& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write history file " + path.string());
    out << "epoch,loss,accuracy\n";
    out.precision(17);
    for (const EpochStats& e : history.epochs) out << e.epoch << ',' << e.loss << ',' << e.accuracy << '\n';
}

}  // namespace cryptosent
