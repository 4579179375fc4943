#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cryptosent/corpus.hpp"
#include "cryptosent/encoder.hpp"
#include "cryptosent/error.hpp"
#include "cryptosent/eval.hpp"
#include "cryptosent/lexicon.hpp"
#include "cryptosent/market.hpp"
#include "cryptosent/neural.hpp"
#include "cryptosent/pipeline.hpp"
#include "cryptosent/sentiment.hpp"
#include "cryptosent/synthkit.hpp"

namespace py = pybind11;
using namespace cryptosent;

namespace {

PipelineConfig config_from_dict(const std::map<std::string, std::string>& settings) {
    PipelineConfig cfg;
    for (const auto& [k, v] : settings) cfg.set(k, v);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crypto sentiment lexicon, LSTM classifier and trend evaluation";

    py::register_exception<Error>(m, "Error");

    py::enum_<SentimentLabel>(m, "SentimentLabel")
        .value("Negative", SentimentLabel::Negative)
        .value("Neutral", SentimentLabel::Neutral)
        .value("Positive", SentimentLabel::Positive);
    py::enum_<Trend>(m, "Trend").value("Up", Trend::Up).value("Down", Trend::Down).value("Flat", Trend::Flat);
    py::enum_<Verdict>(m, "Verdict")
        .value("Up", Verdict::Up)
        .value("Down", Verdict::Down)
        .value("Abstain", Verdict::Abstain);
    py::enum_<ReturnMode>(m, "ReturnMode").value("Log", ReturnMode::Log).value("Simple", ReturnMode::Simple);

    // corpus
    py::class_<Post>(m, "Post")
        .def(py::init<>())
        .def_readwrite("id", &Post::id)
        .def_readwrite("day", &Post::day)
        .def_readwrite("text", &Post::text)
        .def_readwrite("label", &Post::label)
        .def_readwrite("rank", &Post::rank);
    py::class_<Corpus>(m, "Corpus")
        .def(py::init<std::vector<Post>>())
        .def_property_readonly("posts", &Corpus::posts)
        .def("__len__", &Corpus::size)
        .def("day_range", &Corpus::day_range)
        .def("distinct_days", &Corpus::distinct_days);
    m.def("load_corpus", &load_corpus, py::arg("path"), py::arg("require_labels") = false);
    m.def("save_corpus", &save_corpus);
    m.def("split_by_day", &split_by_day);
    m.def("class_histogram", &class_histogram);

    // lexicon
    py::class_<Seed>(m, "Seed")
        .def(py::init<std::string, SentimentLabel>())
        .def_readwrite("surface", &Seed::surface)
        .def_readwrite("polarity", &Seed::polarity);
    py::class_<BootstrapConfig>(m, "BootstrapConfig")
        .def(py::init<>())
        .def_readwrite("rank_threshold", &BootstrapConfig::rank_threshold)
        .def_readwrite("min_candidate_freq", &BootstrapConfig::min_candidate_freq)
        .def_readwrite("max_ngram_len", &BootstrapConfig::max_ngram_len)
        .def_readwrite("max_new_per_iter", &BootstrapConfig::max_new_per_iter)
        .def_readwrite("max_iters", &BootstrapConfig::max_iters)
        .def_readwrite("purity_min", &BootstrapConfig::purity_min);
    py::class_<LexiconEntry>(m, "LexiconEntry")
        .def_readonly("surface", &LexiconEntry::surface)
        .def_readonly("polarity", &LexiconEntry::polarity)
        .def_readonly("frequency", &LexiconEntry::frequency)
        .def_readonly("index", &LexiconEntry::index);
    py::class_<Lexicon>(m, "Lexicon")
        .def(py::init<>())
        .def("add",
             [](Lexicon& l, const std::string& surface, SentimentLabel polarity) {
                 l.add({surface, polarity, 0, std::nullopt});
             },
             py::arg("surface"), py::arg("polarity") = SentimentLabel::Neutral)
        .def_property_readonly("entries", &Lexicon::entries)
        .def("__len__", &Lexicon::size)
        .def("__contains__", [](const Lexicon& l, const std::string& s) { return l.contains(s); })
        .def("vocab_size", &Lexicon::vocab_size);
    m.def("build_lexicon", [](const Corpus& c, const std::vector<Seed>& s, const BootstrapConfig& cfg) {
        return build_lexicon(c, s, cfg);
    }, py::arg("corpus"), py::arg("seeds"), py::arg("config") = BootstrapConfig{});
    m.def("assign_indices", &assign_indices);
    m.def("load_lexicon", &load_lexicon);
    m.def("save_lexicon", &save_lexicon);

    // encoder
    py::class_<Token>(m, "Token")
        .def_readonly("surface", &Token::surface)
        .def_readonly("known", &Token::known)
        .def_readonly("index", &Token::index);
    py::class_<EncodedPost>(m, "EncodedPost")
        .def_readonly("indices", &EncodedPost::indices)
        .def_readonly("length", &EncodedPost::length);
    m.def("tokenize", &tokenize);
    m.def("encode", &encode, py::arg("text"), py::arg("lexicon"), py::arg("max_len") = kDefaultMaxLen);

    // neural
    py::class_<ModelDims>(m, "ModelDims")
        .def(py::init<int, int, int, int>(), py::arg("vocab"), py::arg("embed"), py::arg("hidden"),
             py::arg("classes") = kNumClasses)
        .def_readonly("vocab", &ModelDims::vocab)
        .def_readonly("embed", &ModelDims::embed)
        .def_readonly("hidden", &ModelDims::hidden);
    py::class_<SentimentModel>(m, "SentimentModel")
        .def_readonly("dims", &SentimentModel::dims)
        .def_readonly("seed", &SentimentModel::seed)
        .def_property_readonly("embedding", [](const SentimentModel& s) { return s.params.embedding; })
        .def_property_readonly("forget_bias", [](const SentimentModel& s) { return s.params.gates[kForget].bias; });
    m.def("init_model", &init_model);
    m.def("zero_model", &zero_model);
    m.def("forward_scores", [](const SentimentModel& model, const std::vector<std::int32_t>& tokens) {
        return forward(model, tokens).scores;
    });
    m.def("loss", [](const std::array<double, 3>& scores, SentimentLabel label) {
        return loss(Eigen::Map<const Vector>(scores.data(), 3), label);
    });
    py::class_<GradCheckReport>(m, "GradCheckReport")
        .def_readonly("max_rel_err", &GradCheckReport::max_rel_err)
        .def_readonly("worst_param", &GradCheckReport::worst_param)
        .def_readonly("coordinates_checked", &GradCheckReport::coordinates_checked)
        .def_readonly("passed", &GradCheckReport::passed);
    m.def("grad_check",
          [](const SentimentModel& model, const std::vector<std::int32_t>& tokens, SentimentLabel label, double eps,
             double tol) {
              LabeledPost ex{{tokens, tokens.size(), label}, label};
              GradCheckOptions opts;
              opts.eps = eps;
              opts.tol = tol;
              return grad_check(model, ex, opts);
          },
          py::arg("model"), py::arg("tokens"), py::arg("label"), py::arg("eps") = 1e-5, py::arg("tol") = 1e-4);
    m.def("save_checkpoint", &save_checkpoint);
    m.def("load_checkpoint", &load_checkpoint);

    // sentiment
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("lr", &TrainConfig::lr)
        .def_readwrite("clip", &TrainConfig::clip)
        .def_readwrite("max_len", &TrainConfig::max_len)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("shuffle", &TrainConfig::shuffle)
        .def_readwrite("embed_dim", &TrainConfig::embed_dim)
        .def_readwrite("hidden_dim", &TrainConfig::hidden_dim);
    py::class_<EpochStats>(m, "EpochStats")
        .def_readonly("epoch", &EpochStats::epoch)
        .def_readonly("loss", &EpochStats::loss)
        .def_readonly("accuracy", &EpochStats::accuracy);
    m.def("train", [](const Corpus& c, const Lexicon& l, const TrainConfig& cfg) {
        TrainResult r = train(c, l, cfg);
        return py::make_tuple(r.model, r.history.epochs);
    });
    py::class_<SentimentPrediction>(m, "SentimentPrediction")
        .def_readonly("label", &SentimentPrediction::label)
        .def_readonly("scores", &SentimentPrediction::scores)
        .def_readonly("empty", &SentimentPrediction::empty);
    m.def("predict_post", &predict_post, py::arg("model"), py::arg("lexicon"), py::arg("text"),
          py::arg("max_len") = kDefaultMaxLen);

    // market
    py::class_<PricePoint>(m, "PricePoint")
        .def(py::init<int, double>())
        .def_readonly("day", &PricePoint::day)
        .def_readonly("close", &PricePoint::close);
    py::class_<PriceSeries>(m, "PriceSeries")
        .def(py::init<std::vector<PricePoint>>())
        .def_property_readonly("points", &PriceSeries::points)
        .def("__len__", &PriceSeries::size);
    py::class_<DayTrend>(m, "DayTrend").def_readonly("day", &DayTrend::day).def_readonly("trend", &DayTrend::trend);
    py::class_<TrendPrediction>(m, "TrendPrediction")
        .def_readonly("target_day", &TrendPrediction::target_day)
        .def_readonly("verdict", &TrendPrediction::verdict)
        .def_readonly("pos_votes", &TrendPrediction::pos_votes)
        .def_readonly("neg_votes", &TrendPrediction::neg_votes)
        .def_readonly("neutral_votes", &TrendPrediction::neutral_votes);
    py::class_<ArModel>(m, "ArModel")
        .def_readonly("order", &ArModel::order)
        .def_readonly("coefficients", &ArModel::coefficients)
        .def_readonly("intercept", &ArModel::intercept);
    m.def("load_prices", &load_prices);
    m.def("trend_labels", &trend_labels);
    m.def("majority_vote", [](const std::vector<SentimentLabel>& window, int target_day) {
        return majority_vote(window, target_day);
    });
    m.def("compute_returns", &compute_returns, py::arg("series"), py::arg("mode") = ReturnMode::Log);
    m.def("fit_ar", [](const std::vector<double>& r, int p) { return fit_ar(r, p); });
    m.def("ar_predict", [](const ArModel& model, const std::vector<double>& recent) {
        const ArForecast f = ar_predict(model, recent);
        return py::make_tuple(f.predicted_return, f.trend);
    });

    // eval
    m.def("precision_recall", [](std::size_t tp, std::size_t fp, std::size_t fn) {
        const PrecisionRecall pr = precision_recall_from_counts(tp, fp, fn);
        return py::make_tuple(pr.precision, pr.recall);
    });
    m.def("relative_improvement", &relative_improvement);
    m.def("format_percent", &format_percent);

    // synthkit
    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("seed", &SynthConfig::seed)
        .def_readwrite("n_days", &SynthConfig::n_days)
        .def_readwrite("posts_per_day", &SynthConfig::posts_per_day)
        .def_readwrite("vocab_pos", &SynthConfig::vocab_pos)
        .def_readwrite("vocab_neg", &SynthConfig::vocab_neg)
        .def_readwrite("vocab_neu", &SynthConfig::vocab_neu)
        .def_readwrite("label_noise", &SynthConfig::label_noise)
        .def_readwrite("price_noise", &SynthConfig::price_noise)
        .def_readwrite("sentiment_strength", &SynthConfig::sentiment_strength)
        .def_readwrite("mood_bias", &SynthConfig::mood_bias);
    m.def("synth_corpus", [](const SynthConfig& cfg) {
        SynthCorpus s = synth_corpus(cfg);
        return py::make_tuple(s.corpus, s.seeds);
    });
    m.def("synth_market", &synth_market);

    // pipeline
    m.def("commands", [] { return std::vector<std::string>(std::begin(kCommands), std::end(kCommands)); });
    m.def("run", [](const std::string& command, const std::map<std::string, std::string>& settings) {
        const PipelineConfig cfg = config_from_dict(settings);
        std::ostringstream out;
        run_or_throw(command, cfg, out);
        return out.str();
    }, py::arg("command"), py::arg("settings") = std::map<std::string, std::string>{});
}
