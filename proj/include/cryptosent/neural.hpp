#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cryptosent/corpus.hpp"
#include "cryptosent/encoder.hpp"

namespace cryptosent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kNumClasses = 3;

/// Output class order: Negative, Neutral, Positive.
int class_index(SentimentLabel label);
SentimentLabel class_label(int index);

struct ModelDims {
    int vocab = 0;  // includes PAD and OOV rows
    int embed = 0;
    int hidden = 0;
    int classes = kNumClasses;

    void validate() const;
    friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

enum GateId : std::size_t { kForget = 0, kInput = 1, kOutput = 2, kCandidate = 3 };
inline constexpr std::size_t kNumGates = 4;

struct GateParams {
    Matrix input_w;      // H x D
    Matrix recurrent_w;  // H x H
    Vector bias;         // H
};

/// Every trainable array. Also used for gradients, which share the shapes.
struct Parameters {
    Matrix embedding;  // V x D, row 0 is PAD
    std::array<GateParams, kNumGates> gates;
    Matrix out_w;  // C x H
    Vector out_b;  // C

    static Parameters zeros(const ModelDims& dims);

    /// Calls f(name, array) for each array in checkpoint order. Arrays are
    /// Eigen column-major matrices; vectors are visited as-is.
    template <typename Self, typename F>
    static void visit(Self& p, F&& f) {
        static constexpr std::array<const char*, kNumGates> suffix = {"f", "i", "o", "c"};
        f(std::string("E"), p.embedding);
        for (std::size_t g = 0; g < kNumGates; ++g) {
            f(std::string("W_") + suffix[g], p.gates[g].input_w);
            f(std::string("U_") + suffix[g], p.gates[g].recurrent_w);
            f(std::string("b_") + suffix[g], p.gates[g].bias);
        }
        f(std::string("W_y"), p.out_w);
        f(std::string("b_y"), p.out_b);
    }

    std::size_t count() const;
    double squared_norm() const;
    bool all_finite() const;
};

using Gradients = Parameters;

bool bit_identical(const Parameters& a, const Parameters& b);

struct SentimentModel {
    ModelDims dims;
    std::uint64_t seed = 0;
    Parameters params;
};

/// Uniform(-1/sqrt(H), 1/sqrt(H)) weights, zero biases except the forget
/// gate (1.0), zero PAD embedding row.
SentimentModel init_model(const ModelDims& dims, std::uint64_t seed);
SentimentModel zero_model(const ModelDims& dims);

/// Per-step activations of one forward pass over a post's true length.
struct ForwardTrace {
    std::vector<std::int32_t> tokens;
    std::array<std::vector<Vector>, kNumGates> gates;
    std::vector<Vector> cell;    // c_1..c_L
    std::vector<Vector> hidden;  // h_1..h_L
    Vector logits;
    Vector scores;  // independent sigmoid per class

    std::size_t length() const noexcept { return tokens.size(); }
};

ForwardTrace forward(const SentimentModel& model, const EncodedPost& post);
ForwardTrace forward(const SentimentModel& model, std::span<const std::int32_t> tokens);

/// Scores are clamped to [kLossClamp, 1 - kLossClamp] before taking logs.
inline constexpr double kLossClamp = 1e-12;

/// Summed binary cross-entropy of the three sigmoid scores against the
/// one-hot target of `label`.
double loss(const Vector& scores, SentimentLabel label);

struct LabeledPost {
    EncodedPost input;
    SentimentLabel label;
};

/// Exact gradient of the mean batch loss by backpropagation through time.
/// The PAD embedding row always receives a zero gradient.
Gradients backward(const SentimentModel& model, std::span<const LabeledPost> batch,
                   double* mean_loss = nullptr);

/// Clips to global L2 norm `clip`, then takes p -= lr * g. Returns the
/// pre-clip gradient norm. Throws NumericError (model untouched) on a
/// non-finite gradient.
double apply_sgd(SentimentModel& model, const Gradients& grads, double lr, double clip);
SentimentModel sgd_step(SentimentModel model, const Gradients& grads, double lr, double clip);

struct GradCheckOptions {
    double eps = 1e-5;
    double tol = 1e-4;
    /// Models with more coordinates than this are checked on a seeded sample
    /// of `sample_size` coordinates.
    std::size_t full_check_limit = 8192;
    std::size_t sample_size = 512;
    std::uint64_t sample_seed = 0;
    /// Evaluate the perturbed losses in long double. In plain double the
    /// difference quotient carries about ulp(loss) / eps of roundoff (2e-11
    /// for a loss near 2), which swamps coordinates with |g| below ~1e-7.
    bool extended_precision = true;
};

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;  // e.g. "U_f[2,1]"
    std::size_t coordinates_checked = 0;
    bool passed = false;
};

/// relative error = |a - n| / max(|a|, |n|, 1e-8) with central differences.
GradCheckReport grad_check(const SentimentModel& model, const LabeledPost& example,
                           const GradCheckOptions& opts = {});
/// Same comparison against caller-supplied analytic gradients.
GradCheckReport grad_check_against(const SentimentModel& model, const LabeledPost& example,
                                   const Gradients& analytic, const GradCheckOptions& opts = {});

/// Text checkpoint; doubles are written in shortest round-trip decimal so a
/// load reproduces every bit.
void write_checkpoint(std::ostream& out, const SentimentModel& model);
SentimentModel parse_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const SentimentModel& model);
SentimentModel load_checkpoint(const std::filesystem::path& path);

}  // namespace cryptosent
