#include "cryptosent/neural.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "cryptosent/error.hpp"

namespace cryptosent {

int class_index(SentimentLabel label) { return label_code(label) + 1; }

SentimentLabel class_label(int index) { return label_from_code(index - 1); }

void ModelDims::validate() const {
    if (vocab < 3) throw ConfigError("model vocab must be >= 3");
    if (embed < 1) throw ConfigError("embedding size must be >= 1");
    if (hidden < 1) throw ConfigError("hidden size must be >= 1");
    if (classes != kNumClasses) throw ConfigError("model must have exactly 3 classes");
}

Parameters Parameters::zeros(const ModelDims& dims) {
    dims.validate();
    Parameters p;
    p.embedding = Matrix::Zero(dims.vocab, dims.embed);
    for (GateParams& g : p.gates) {
        g.input_w = Matrix::Zero(dims.hidden, dims.embed);
        g.recurrent_w = Matrix::Zero(dims.hidden, dims.hidden);
        g.bias = Vector::Zero(dims.hidden);
    }
    p.out_w = Matrix::Zero(dims.classes, dims.hidden);
    p.out_b = Vector::Zero(dims.classes);
    return p;
}

std::size_t Parameters::count() const {
    std::size_t n = 0;
    visit(*this, [&](const std::string&, const auto& a) { n += static_cast<std::size_t>(a.size()); });
    return n;
}

double Parameters::squared_norm() const {
    double s = 0.0;
    visit(*this, [&](const std::string&, const auto& a) { s += a.squaredNorm(); });
    return s;
}

bool Parameters::all_finite() const {
    bool finite = true;
    visit(*this, [&](const std::string&, const auto& a) { finite = finite && a.allFinite(); });
    return finite;
}

bool bit_identical(const Parameters& a, const Parameters& b) {
    std::vector<std::pair<const double*, Eigen::Index>> lhs;
    std::vector<std::pair<const double*, Eigen::Index>> rhs;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> lshape;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> rshape;
    Parameters::visit(a, [&](const std::string&, const auto& m) {
        lhs.emplace_back(m.data(), m.size());
        lshape.emplace_back(m.rows(), m.cols());
    });
    Parameters::visit(b, [&](const std::string&, const auto& m) {
        rhs.emplace_back(m.data(), m.size());
        rshape.emplace_back(m.rows(), m.cols());
    });
    if (lshape != rshape) return false;
    for (std::size_t k = 0; k < lhs.size(); ++k)
        if (std::memcmp(lhs[k].first, rhs[k].first, sizeof(double) * static_cast<std::size_t>(lhs[k].second)) != 0)
            return false;
    return true;
}

SentimentModel zero_model(const ModelDims& dims) { return {dims, 0, Parameters::zeros(dims)}; }

SentimentModel init_model(const ModelDims& dims, std::uint64_t seed) {
    SentimentModel model{dims, seed, Parameters::zeros(dims)};
    std::mt19937_64 rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    auto fill = [&](Matrix& m) {
        for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = uniform(rng);
    };
    fill(model.params.embedding);
    model.params.embedding.row(Lexicon::kPad).setZero();
    for (GateParams& g : model.params.gates) {
        fill(g.input_w);
        fill(g.recurrent_w);
    }
    fill(model.params.out_w);
    model.params.gates[kForget].bias.setConstant(1.0);
    return model;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vector sigmoid(const Vector& x) { return x.unaryExpr([](double v) { return sigmoid(v); }); }

Vector tanh_vec(const Vector& x) { return x.unaryExpr([](double v) { return std::tanh(v); }); }

}  // namespace

ForwardTrace forward(const SentimentModel& model, std::span<const std::int32_t> tokens) {
    if (tokens.empty()) throw DataError("forward requires at least one token");
    const Parameters& p = model.params;
    const int H = model.dims.hidden;

    ForwardTrace trace;
    trace.tokens.assign(tokens.begin(), tokens.end());
    for (auto& g : trace.gates) g.reserve(tokens.size());
    trace.cell.reserve(tokens.size());
    trace.hidden.reserve(tokens.size());

    Vector h = Vector::Zero(H);
    Vector c = Vector::Zero(H);
    Vector act(H);
    for (std::int32_t token : tokens) {
        if (token < 0 || token >= model.dims.vocab)
            throw DataError("token index " + std::to_string(token) + " outside vocabulary of " +
                            std::to_string(model.dims.vocab));
        const Vector e = p.embedding.row(token).transpose();
        for (std::size_t g = 0; g < kNumGates; ++g) {
            act.noalias() = p.gates[g].input_w * e;
            act.noalias() += p.gates[g].recurrent_w * h;
            act += p.gates[g].bias;
            trace.gates[g].push_back(g == kCandidate ? tanh_vec(act) : sigmoid(act));
        }
        c = trace.gates[kForget].back().cwiseProduct(c) +
            trace.gates[kInput].back().cwiseProduct(trace.gates[kCandidate].back());
        h = trace.gates[kOutput].back().cwiseProduct(tanh_vec(c));
        trace.cell.push_back(c);
        trace.hidden.push_back(h);
    }
    trace.logits = p.out_w * h + p.out_b;
    trace.scores = sigmoid(trace.logits);
    return trace;
}

ForwardTrace forward(const SentimentModel& model, const EncodedPost& post) {
    if (post.length == 0) throw DataError("forward requires a non-empty post");
    if (post.length > post.indices.size()) throw DataError("encoded length exceeds capacity");
    return forward(model, std::span<const std::int32_t>(post.indices.data(), post.length));
}

double loss(const Vector& scores, SentimentLabel label) {
    if (scores.size() != kNumClasses) throw DataError("loss expects three class scores");
    const int target = class_index(label);
    double total = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
        const double s = std::clamp(scores[k], kLossClamp, 1.0 - kLossClamp);
        total -= k == target ? std::log(s) : std::log1p(-s);
    }
    return total;
}

namespace {

/// Adds d(loss)/d(params) * weight for one post into grads.
double accumulate_example(const SentimentModel& model, const LabeledPost& example, double weight,
                          Gradients& grads) {
    const Parameters& p = model.params;
    const ForwardTrace trace = forward(model, example.input);
    const double example_loss = loss(trace.scores, example.label);
    const std::size_t L = trace.length();
    const int H = model.dims.hidden;

    Vector target = Vector::Zero(kNumClasses);
    target[class_index(example.label)] = 1.0;
    const Vector dz = (trace.scores - target) * weight;

    grads.out_w.noalias() += dz * trace.hidden.back().transpose();
    grads.out_b += dz;
    Vector dh = p.out_w.transpose() * dz;
    Vector dc = Vector::Zero(H);
    const Vector zero = Vector::Zero(H);

    std::array<Vector, kNumGates> da;
    for (std::size_t t = L; t-- > 0;) {
        const Vector& f = trace.gates[kForget][t];
        const Vector& i = trace.gates[kInput][t];
        const Vector& o = trace.gates[kOutput][t];
        const Vector& g = trace.gates[kCandidate][t];
        const Vector& c_prev = t > 0 ? trace.cell[t - 1] : zero;
        const Vector& h_prev = t > 0 ? trace.hidden[t - 1] : zero;
        const Vector tc = tanh_vec(trace.cell[t]);

        dc += dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix());
        da[kOutput] = dh.cwiseProduct(tc).cwiseProduct(o.cwiseProduct((1.0 - o.array()).matrix()));
        da[kForget] = dc.cwiseProduct(c_prev).cwiseProduct(f.cwiseProduct((1.0 - f.array()).matrix()));
        da[kInput] = dc.cwiseProduct(g).cwiseProduct(i.cwiseProduct((1.0 - i.array()).matrix()));
        da[kCandidate] = dc.cwiseProduct(i).cwiseProduct((1.0 - g.array().square()).matrix());

        const std::int32_t token = trace.tokens[t];
        const Vector e = p.embedding.row(token).transpose();
        Vector de = Vector::Zero(model.dims.embed);
        Vector dh_prev = Vector::Zero(H);
        for (std::size_t k = 0; k < kNumGates; ++k) {
            grads.gates[k].input_w.noalias() += da[k] * e.transpose();
            grads.gates[k].recurrent_w.noalias() += da[k] * h_prev.transpose();
            grads.gates[k].bias += da[k];
            de.noalias() += p.gates[k].input_w.transpose() * da[k];
            dh_prev.noalias() += p.gates[k].recurrent_w.transpose() * da[k];
        }
        grads.embedding.row(token) += de.transpose();
        dh = dh_prev;
        dc = dc.cwiseProduct(f);
    }
    return example_loss;
}

}  // namespace

Gradients backward(const SentimentModel& model, std::span<const LabeledPost> batch, double* mean_loss) {
    if (batch.empty()) throw DataError("backward requires a non-empty batch");
    Gradients grads = Parameters::zeros(model.dims);
    const double weight = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    // Fixed left-to-right reduction keeps results bit-reproducible.
    for (const LabeledPost& example : batch) total += accumulate_example(model, example, weight, grads);
    grads.embedding.row(Lexicon::kPad).setZero();
    if (mean_loss) *mean_loss = total * weight;
    return grads;
}

double apply_sgd(SentimentModel& model, const Gradients& grads, double lr, double clip) {
    if (!(lr >= 0.0)) throw ConfigError("learning rate must be non-negative");
    if (!(clip > 0.0)) throw ConfigError("clip must be positive");
    if (!grads.all_finite()) throw NumericError("non-finite gradient; step rejected");

    std::vector<Eigen::Index> model_shapes;
    std::vector<Eigen::Index> grad_shapes;
    Parameters::visit(model.params, [&](const std::string&, const auto& a) {
        model_shapes.push_back(a.rows());
        model_shapes.push_back(a.cols());
    });
    Parameters::visit(grads, [&](const std::string&, const auto& a) {
        grad_shapes.push_back(a.rows());
        grad_shapes.push_back(a.cols());
    });
    if (model_shapes != grad_shapes) throw DataError("gradient shapes do not match the model");

    const double norm = std::sqrt(grads.squared_norm());
    const double scale = norm > clip ? clip / norm : 1.0;
    const double step = lr * scale;

    std::vector<const double*> sources;
    Parameters::visit(grads, [&](const std::string&, const auto& a) { sources.push_back(a.data()); });
    std::size_t k = 0;
    Parameters::visit(model.params, [&](const std::string&, auto& a) {
        const double* g = sources[k++];
        double* w = a.data();
        for (Eigen::Index j = 0; j < a.size(); ++j) w[j] -= step * g[j];
    });
    return norm;
}

SentimentModel sgd_step(SentimentModel model, const Gradients& grads, double lr, double clip) {
    apply_sgd(model, grads, lr, clip);
    return model;
}

namespace {

struct FlatArray {
    std::string name;
    double* data;
    Eigen::Index rows;
    Eigen::Index cols;
    bool is_vector;
};

std::vector<FlatArray> flatten(Parameters& p) {
    std::vector<FlatArray> out;
    Parameters::visit(p, [&](const std::string& name, auto& a) {
        constexpr bool is_vec = std::remove_reference_t<decltype(a)>::ColsAtCompileTime == 1;
        out.push_back({name, a.data(), a.rows(), a.cols(), is_vec});
    });
    return out;
}

std::string coordinate_name(const FlatArray& a, Eigen::Index offset) {
    // Column-major storage.
    const Eigen::Index row = offset % a.rows;
    const Eigen::Index col = offset / a.rows;
    if (a.is_vector) return a.name + "[" + std::to_string(row) + "]";
    return a.name + "[" + std::to_string(row) + "," + std::to_string(col) + "]";
}

using MatrixX = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorX = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// The model in 80-bit floats, one matrix per array in visit order.
std::vector<MatrixX> widen(const Parameters& p) {
    std::vector<MatrixX> out;
    Parameters::visit(p, [&](const std::string&, const auto& a) { out.push_back(a.template cast<long double>()); });
    return out;
}

// Same recurrence as forward(), evaluated in extended precision.
long double wide_loss(const std::vector<MatrixX>& w, std::span<const std::int32_t> tokens, SentimentLabel label) {
    auto sig = [](long double v) { return 1.0L / (1.0L + std::exp(-v)); };
    const MatrixX& emb = w[0];
    const Eigen::Index H = w[2].rows();
    VectorX h = VectorX::Zero(H), c = VectorX::Zero(H);
    std::array<VectorX, kNumGates> gate;
    for (std::int32_t token : tokens) {
        const VectorX e = emb.row(token).transpose();
        for (std::size_t g = 0; g < kNumGates; ++g) {
            VectorX a = w[1 + 3 * g] * e + w[2 + 3 * g] * h + w[3 + 3 * g];
            gate[g] = g == kCandidate ? VectorX(a.array().tanh()) : VectorX(a.unaryExpr(sig));
        }
        c = gate[kForget].cwiseProduct(c) + gate[kInput].cwiseProduct(gate[kCandidate]);
        h = gate[kOutput].cwiseProduct(VectorX(c.array().tanh()));
    }
    const VectorX z = w[13] * h + w[14];
    const int target = class_index(label);
    long double total = 0.0L;
    for (int k = 0; k < kNumClasses; ++k) {
        const long double s = std::clamp(sig(z[k]), static_cast<long double>(kLossClamp), 1.0L - kLossClamp);
        total -= k == target ? std::log(s) : std::log1p(-s);
    }
    return total;
}

}  // namespace

GradCheckReport grad_check_against(const SentimentModel& model, const LabeledPost& example,
                                   const Gradients& analytic, const GradCheckOptions& opts) {
    if (!(opts.eps > 0.0) || !(opts.tol > 0.0)) throw ConfigError("grad_check needs eps > 0 and tol > 0");

    SentimentModel probe = model;
    Gradients analytic_copy = analytic;
    auto probe_arrays = flatten(probe.params);
    auto grad_arrays = flatten(analytic_copy);

    std::vector<std::pair<std::size_t, Eigen::Index>> coords;
    for (std::size_t a = 0; a < probe_arrays.size(); ++a)
        for (Eigen::Index j = 0; j < probe_arrays[a].rows * probe_arrays[a].cols; ++j) coords.emplace_back(a, j);
    if (coords.size() > opts.full_check_limit) {
        std::mt19937_64 rng(opts.sample_seed);
        std::shuffle(coords.begin(), coords.end(), rng);
        coords.resize(std::max<std::size_t>(opts.sample_size, 500));
        std::sort(coords.begin(), coords.end());
    }

    auto example_loss = [&] { return loss(forward(probe, example.input).scores, example.label); };
    std::vector<MatrixX> wide;
    if (opts.extended_precision) {
        if (example.input.length == 0) throw DataError("grad_check requires a non-empty post");
        wide = widen(model.params);
    }
    const std::span<const std::int32_t> tokens(example.input.indices.data(), example.input.length);

    GradCheckReport report;
    report.max_rel_err = 0.0;
    for (const auto& [a, j] : coords) {
        double numeric;
        if (opts.extended_precision) {
            long double& w = wide[a].data()[j];
            const long double saved = w;
            w = saved + static_cast<long double>(opts.eps);
            const long double up = wide_loss(wide, tokens, example.label);
            w = saved - static_cast<long double>(opts.eps);
            const long double down = wide_loss(wide, tokens, example.label);
            w = saved;
            numeric = static_cast<double>((up - down) / (2.0L * static_cast<long double>(opts.eps)));
        } else {
            double& w = probe_arrays[a].data[j];
            const double saved = w;
            w = saved + opts.eps;
            const double up = example_loss();
            w = saved - opts.eps;
            const double down = example_loss();
            w = saved;
            numeric = (up - down) / (2.0 * opts.eps);
        }
        const double exact = grad_arrays[a].data[j];
        const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-8});
        const double rel = std::abs(exact - numeric) / denom;
        if (report.worst_param.empty() || rel > report.max_rel_err) {
            report.max_rel_err = rel;
            report.worst_param = coordinate_name(probe_arrays[a], j);
        }
        ++report.coordinates_checked;
    }
    report.passed = report.max_rel_err < opts.tol;
    return report;
}

GradCheckReport grad_check(const SentimentModel& model, const LabeledPost& example, const GradCheckOptions& opts) {
    const Gradients analytic = backward(model, std::span<const LabeledPost>(&example, 1));
    return grad_check_against(model, example, analytic, opts);
}

namespace {

constexpr std::string_view kFormatLine = "model_format_version: 1";

void write_double(std::ostream& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

std::string expect_line(std::istream& in, const std::string& what) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("checkpoint truncated before " + what);
    return line;
}

long long header_value(std::istream& in, const std::string& key) {
    const std::string line = expect_line(in, key);
    const std::string prefix = key + ": ";
    if (line.rfind(prefix, 0) != 0) throw DataError("checkpoint: expected '" + prefix + "...', got '" + line + "'");
    long long value = 0;
    const char* first = line.data() + prefix.size();
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw DataError("checkpoint: bad value for " + key);
    return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, const SentimentModel& model) {
    out << kFormatLine << '\n';
    out << "vocab: " << model.dims.vocab << '\n';
    out << "embed: " << model.dims.embed << '\n';
    out << "hidden: " << model.dims.hidden << '\n';
    out << "classes: " << model.dims.classes << '\n';
    out << "seed: " << model.seed << '\n';
    Parameters::visit(model.params, [&](const std::string& name, const auto& a) {
        out << "array " << name << ' ' << a.rows() << ' ' << a.cols() << '\n';
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            for (Eigen::Index c = 0; c < a.cols(); ++c) {
                if (c) out << ' ';
                write_double(out, a(r, c));
            }
            out << '\n';
        }
    });
    out << "end\n";
}

SentimentModel parse_checkpoint(std::istream& in) {
    if (expect_line(in, "format version") != kFormatLine)
        throw DataError("checkpoint: unsupported or missing model_format_version");
    ModelDims dims;
    dims.vocab = static_cast<int>(header_value(in, "vocab"));
    dims.embed = static_cast<int>(header_value(in, "embed"));
    dims.hidden = static_cast<int>(header_value(in, "hidden"));
    dims.classes = static_cast<int>(header_value(in, "classes"));
    try {
        dims.validate();
    } catch (const ConfigError& e) {
        throw DataError(std::string("checkpoint: ") + e.what());
    }
    SentimentModel model{dims, 0, Parameters::zeros(dims)};
    model.seed = static_cast<std::uint64_t>(header_value(in, "seed"));

    Parameters::visit(model.params, [&](const std::string& name, auto& a) {
        std::istringstream head(expect_line(in, "array " + name));
        std::string tag, found;
        Eigen::Index rows = -1, cols = -1;
        head >> tag >> found >> rows >> cols;
        if (tag != "array" || found != name || rows != a.rows() || cols != a.cols())
            throw DataError("checkpoint: expected array " + name + " " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
        for (Eigen::Index r = 0; r < rows; ++r) {
            const std::string line = expect_line(in, name + " row");
            const char* p = line.data();
            const char* last = line.data() + line.size();
            for (Eigen::Index c = 0; c < cols; ++c) {
                while (p < last && *p == ' ') ++p;
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(p, last, v);
                if (ec != std::errc()) throw DataError("checkpoint: bad number in " + name);
                a(r, c) = v;
                p = ptr;
            }
            if (p != last) throw DataError("checkpoint: trailing data in " + name);
        }
    });
    if (expect_line(in, "end marker") != "end") throw DataError("checkpoint: missing end marker");
    if (!model.params.all_finite()) throw DataError("checkpoint contains non-finite parameters");
    return model;
}

void save_checkpoint(const std::filesystem::path& path, const SentimentModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint " + path.string());
    write_checkpoint(out, model);
}

SentimentModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint " + path.string());
    return parse_checkpoint(in);
}

}  // namespace cryptosent
