#include "cryptosent/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <iostream>
#include <sstream>
#include <type_traits>

#include "cryptosent/encoder.hpp"
#include "cryptosent/error.hpp"
#include "cryptosent/eval.hpp"
#include "cryptosent/neural.hpp"

namespace cryptosent {

namespace {

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
    T out{};
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), last, out);
    if (value.empty() || ec != std::errc() || ptr != last)
        throw ConfigError("invalid value '" + std::string(value) + "' for key " + std::string(key));
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("invalid boolean '" + std::string(value) + "' for key " + std::string(key));
}

std::string show(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
std::string show(int v) { return std::to_string(v); }
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(bool v) { return v ? "true" : "false"; }

struct KeySpec {
    std::string name;
    bool is_path;
    std::function<void(PipelineConfig&, std::string_view)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
KeySpec number_key(std::string name, T PipelineConfig::*outer) {
    return {name, false,
            [name, outer](PipelineConfig& c, std::string_view v) { c.*outer = parse_value<T>(name, v); },
            [outer](const PipelineConfig& c) { return show(c.*outer); }};
}

template <typename Group, typename T>
KeySpec nested_key(std::string name, Group PipelineConfig::*group, T Group::*field) {
    return {name, false,
            [name, group, field](PipelineConfig& c, std::string_view v) {
                if constexpr (std::is_same_v<T, bool>)
                    (c.*group).*field = parse_bool(name, v);
                else
                    (c.*group).*field = parse_value<T>(name, v);
            },
            [group, field](const PipelineConfig& c) { return show((c.*group).*field); }};
}

KeySpec path_key(std::string name, std::filesystem::path PipelineConfig::*member) {
    return {name, true, [member](PipelineConfig& c, std::string_view v) { c.*member = std::string(v); },
            [member](const PipelineConfig& c) { return (c.*member).string(); }};
}

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = [] {
        using C = PipelineConfig;
        std::vector<KeySpec> s;
        s.push_back(path_key("corpus", &C::corpus));
        s.push_back(path_key("prices", &C::prices));
        s.push_back(path_key("seeds", &C::seeds));
        s.push_back(path_key("lexicon", &C::lexicon));
        s.push_back(path_key("checkpoint", &C::checkpoint));
        s.push_back(path_key("history", &C::history));
        s.push_back(path_key("sentiment_predictions", &C::sentiment_predictions));
        s.push_back(path_key("trend_predictions", &C::trend_predictions));
        s.push_back(path_key("ar_predictions", &C::ar_predictions));
        s.push_back(path_key("report", &C::report));
        s.push_back(path_key("report_json", &C::report_json));

        s.push_back(nested_key("epochs", &C::train, &TrainConfig::epochs));
        s.push_back(nested_key("batch_size", &C::train, &TrainConfig::batch_size));
        s.push_back(nested_key("lr", &C::train, &TrainConfig::lr));
        s.push_back(nested_key("clip", &C::train, &TrainConfig::clip));
        s.push_back(nested_key("max_len", &C::train, &TrainConfig::max_len));
        s.push_back({"seed", false,
                     [](C& c, std::string_view v) {
                         c.train.seed = parse_value<std::uint64_t>("seed", v);
                         c.synth.seed = c.train.seed;
                     },
                     [](const C& c) { return show(c.train.seed); }});
        s.push_back(nested_key("shuffle", &C::train, &TrainConfig::shuffle));
        s.push_back(nested_key("embed_dim", &C::train, &TrainConfig::embed_dim));
        s.push_back(nested_key("hidden_dim", &C::train, &TrainConfig::hidden_dim));

        s.push_back(nested_key("rank_threshold", &C::bootstrap, &BootstrapConfig::rank_threshold));
        s.push_back(nested_key("min_candidate_freq", &C::bootstrap, &BootstrapConfig::min_candidate_freq));
        s.push_back(nested_key("max_ngram_len", &C::bootstrap, &BootstrapConfig::max_ngram_len));
        s.push_back(nested_key("max_new_per_iter", &C::bootstrap, &BootstrapConfig::max_new_per_iter));
        s.push_back(nested_key("max_iters", &C::bootstrap, &BootstrapConfig::max_iters));
        s.push_back(nested_key("purity_min", &C::bootstrap, &BootstrapConfig::purity_min));

        s.push_back(number_key("train_days", &C::train_days));
        s.push_back(number_key("ar_order", &C::ar_order));
        s.push_back({"return_mode", false,
                     [](C& c, std::string_view v) { c.return_mode = return_mode_from_name(v); },
                     [](const C& c) { return std::string(return_mode_name(c.return_mode)); }});
        s.push_back({"boundary_day", false,
                     [](C& c, std::string_view v) {
                         if (v.empty() || v == "auto")
                             c.boundary_day.reset();
                         else
                             c.boundary_day = parse_value<int>("boundary_day", v);
                     },
                     [](const C& c) { return c.boundary_day ? show(*c.boundary_day) : std::string("auto"); }});
        s.push_back({"text", true, [](C& c, std::string_view v) { c.text = std::string(v); },
                     [](const C& c) { return c.text.value_or(""); }});

        s.push_back(nested_key("n_days", &C::synth, &SynthConfig::n_days));
        s.push_back(nested_key("posts_per_day", &C::synth, &SynthConfig::posts_per_day));
        s.push_back(nested_key("vocab_pos", &C::synth, &SynthConfig::vocab_pos));
        s.push_back(nested_key("vocab_neg", &C::synth, &SynthConfig::vocab_neg));
        s.push_back(nested_key("vocab_neu", &C::synth, &SynthConfig::vocab_neu));
        s.push_back(nested_key("label_noise", &C::synth, &SynthConfig::label_noise));
        s.push_back(nested_key("price_noise", &C::synth, &SynthConfig::price_noise));
        s.push_back(nested_key("sentiment_strength", &C::synth, &SynthConfig::sentiment_strength));
        s.push_back(nested_key("mood_bias", &C::synth, &SynthConfig::mood_bias));
        s.push_back(nested_key("seeds_per_polarity", &C::synth, &SynthConfig::seeds_per_polarity));

        s.push_back(number_key("gc_vocab", &C::gc_vocab));
        s.push_back(number_key("gc_embed", &C::gc_embed));
        s.push_back(number_key("gc_hidden", &C::gc_hidden));
        s.push_back(number_key("gc_length", &C::gc_length));
        s.push_back(number_key("gc_eps", &C::gc_eps));
        s.push_back(number_key("gc_tol", &C::gc_tol));
        return s;
    }();
    return specs;
}

std::string_view trim_ascii(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
    for (const KeySpec& spec : key_specs()) {
        if (spec.name == key) {
            spec.set(*this, value);
            return;
        }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

const std::vector<std::string>& PipelineConfig::keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const KeySpec& s : key_specs()) n.push_back(s.name);
        return n;
    }();
    return names;
}

std::string PipelineConfig::canonical() const {
    std::map<std::string, std::string> sorted;
    for (const KeySpec& s : key_specs())
        if (!s.is_path) sorted[s.name] = s.get(*this);
    std::string out;
    for (const auto& [k, v] : sorted) out += k + " = " + v + "\n";
    return out;
}

std::string PipelineConfig::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void apply_config(PipelineConfig& cfg, std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim_ascii(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        cfg.set(trim_ascii(body.substr(0, eq)), trim_ascii(body.substr(eq + 1)));
    }
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig cfg;
    apply_config(cfg, in);
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

void rebase_paths(PipelineConfig& cfg, const std::filesystem::path& dir) {
    for (auto* p : {&cfg.corpus, &cfg.prices, &cfg.seeds, &cfg.lexicon, &cfg.checkpoint, &cfg.history,
                    &cfg.sentiment_predictions, &cfg.trend_predictions, &cfg.ar_predictions, &cfg.report,
                    &cfg.report_json})
        if (p->is_relative()) *p = dir / *p;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

Corpus training_split(const PipelineConfig& cfg, const Corpus& corpus) {
    return split_by_day(corpus, cfg.train_days).first;
}

Corpus test_split(const PipelineConfig& cfg, const Corpus& corpus) {
    return split_by_day(corpus, cfg.train_days).second;
}

void check_model_matches(const SentimentModel& model, const Lexicon& lexicon) {
    if (model.dims.vocab != lexicon.vocab_size())
        throw DataError("checkpoint vocabulary " + std::to_string(model.dims.vocab) + " does not match lexicon (" +
                        std::to_string(lexicon.vocab_size()) + ")");
}

void cmd_synth(const PipelineConfig& cfg, std::ostream& out) {
    const SynthCorpus world = synth_corpus(cfg.synth);
    save_corpus(cfg.corpus, world.corpus);
    save_seeds(cfg.seeds, world.seeds);
    const PriceSeries prices = synth_market(world.corpus, cfg.synth);
    save_prices(cfg.prices, prices);
    out << "synth: " << world.corpus.size() << " posts over " << cfg.synth.n_days << " days, " << world.seeds.size()
        << " seeds, " << prices.size() << " closes\n";
}

void cmd_build_lexicon(const PipelineConfig& cfg, std::ostream& out) {
    const Corpus corpus = training_split(cfg, load_corpus(cfg.corpus, false));
    BootstrapTrace trace;
    const Lexicon lexicon = build_lexicon(corpus, load_seeds(cfg.seeds), cfg.bootstrap, &trace);
    save_lexicon(cfg.lexicon, lexicon);
    out << "build-lexicon: " << lexicon.size() << " entries after " << trace.added_per_iteration.size()
        << " iteration(s)" << (trace.converged ? " (fixed point)" : "") << '\n';
}

void cmd_encode(const PipelineConfig& cfg, std::ostream& out) {
    const Lexicon lexicon = load_lexicon(cfg.lexicon);
    Corpus corpus;
    if (cfg.corpus == "-") {
        corpus = parse_corpus(std::cin, false);
    } else {
        corpus = load_corpus(cfg.corpus, false);
    }
    for (const Post& post : corpus) {
        const EncodedPost e = encode(post.text, lexicon, cfg.train.max_len);
        out << e.length;
        for (std::int32_t idx : e.indices) out << ' ' << idx;
        out << '\n';
    }
}

void cmd_train(const PipelineConfig& cfg, std::ostream& out) {
    const Corpus corpus = training_split(cfg, load_corpus(cfg.corpus, true));
    const Lexicon lexicon = load_lexicon(cfg.lexicon);
    const TrainResult result = train(corpus, lexicon, cfg.train);
    save_checkpoint(cfg.checkpoint, result.model);
    save_history(cfg.history, result.history);
    const EpochStats& last = result.history.epochs.back();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "train: %d epochs, final loss %.6f, accuracy %.4f", last.epoch, last.loss,
                  last.accuracy);
    out << buf << " (" << corpus.size() - result.history.skipped_empty << " posts)\n";
}

void cmd_predict_sentiment(const PipelineConfig& cfg, std::ostream& out) {
    const Lexicon lexicon = load_lexicon(cfg.lexicon);
    const SentimentModel model = load_checkpoint(cfg.checkpoint);
    check_model_matches(model, lexicon);

    auto write_row = [](std::ostream& os, const SentimentPrediction& p) {
        os << label_code(p.label);
        for (int k = 0; k < kNumClasses; ++k) {
            os << '\t';
            if (p.scores) os << show((*p.scores)[static_cast<std::size_t>(k)]);
        }
        os << '\t' << (p.empty ? "empty" : "ok");
    };

    if (cfg.text) {
        write_row(out, predict_post(model, lexicon, *cfg.text, cfg.train.max_len));
        out << '\n';
        return;
    }
    const Corpus corpus = load_corpus(cfg.corpus, false);
    auto file = open_out(cfg.sentiment_predictions);
    file << "#id\tday\tpredicted\tscore_neg\tscore_neu\tscore_pos\tstatus\n";
    for (const Post& post : corpus) {
        file << post.id << '\t' << post.day << '\t';
        write_row(file, predict_post(model, lexicon, post.text, cfg.train.max_len));
        file << '\n';
    }
    out << "predict-sentiment: " << corpus.size() << " posts -> " << cfg.sentiment_predictions.string() << '\n';
}

std::vector<TrendPrediction> trend_predictions(const PipelineConfig& cfg, const Corpus& test,
                                               const SentimentModel& model, const Lexicon& lexicon) {
    std::map<int, std::vector<SentimentLabel>> by_day;
    for (const Post& post : test)
        by_day[post.day].push_back(predict_post(model, lexicon, post.text, cfg.train.max_len).label);
    std::vector<TrendPrediction> out;
    for (const auto& [day, labels] : by_day) out.push_back(majority_vote(labels, day + 1));
    return out;
}

void cmd_predict_trend(const PipelineConfig& cfg, std::ostream& out) {
    const Corpus test = test_split(cfg, load_corpus(cfg.corpus, false));
    const Lexicon lexicon = load_lexicon(cfg.lexicon);
    const SentimentModel model = load_checkpoint(cfg.checkpoint);
    check_model_matches(model, lexicon);
    const auto predictions = trend_predictions(cfg, test, model, lexicon);
    auto file = open_out(cfg.trend_predictions);
    write_trend_predictions(file, predictions);
    out << "predict-trend: " << predictions.size() << " target days -> " << cfg.trend_predictions.string() << '\n';
}

int resolve_boundary(const PipelineConfig& cfg) {
    if (cfg.boundary_day) return *cfg.boundary_day;
    const Corpus test = test_split(cfg, load_corpus(cfg.corpus, false));
    return test.posts().front().day;
}

void cmd_baseline_ar(const PipelineConfig& cfg, std::ostream& out) {
    const PriceSeries prices = load_prices(cfg.prices);
    const int boundary = resolve_boundary(cfg);
    const ArBaseline baseline = run_ar_baseline(prices, cfg.ar_order, cfg.return_mode, boundary);
    auto file = open_out(cfg.ar_predictions);
    write_ar_forecasts(file, baseline.forecasts);
    out << "baseline-ar: AR(" << cfg.ar_order << ") intercept " << show(baseline.model.intercept) << " phi [";
    for (std::size_t k = 0; k < baseline.model.coefficients.size(); ++k)
        out << (k ? ", " : "") << show(baseline.model.coefficients[k]);
    out << "], " << baseline.forecasts.size() << " forecasts after day " << boundary << '\n';
}

struct PostPrediction {
    SentimentLabel predicted;
    bool empty;
};

std::map<std::string, PostPrediction> load_sentiment_predictions(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::map<std::string, PostPrediction> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        for (std::string cell; std::getline(ss, cell, '\t');) f.push_back(cell);
        if (f.size() != 7) throw DataError("malformed sentiment prediction line in " + path.string());
        out[f[0]] = {label_from_code(parse_value<int>("predicted", f[2])), f[6] == "empty"};
    }
    return out;
}

void cmd_evaluate(const PipelineConfig& cfg, std::ostream& out) {
    const Corpus corpus = load_corpus(cfg.corpus, false);
    const auto [train_part, test_part] = split_by_day(corpus, cfg.train_days);
    const auto actual = trend_labels(load_prices(cfg.prices));

    auto lstm_in = open_in(cfg.trend_predictions);
    std::vector<DayVerdict> lstm;
    for (const TrendPrediction& p : parse_trend_predictions(lstm_in)) lstm.push_back(p.day_verdict());
    auto ar_in = open_in(cfg.ar_predictions);
    const std::vector<DayVerdict> ar = parse_ar_verdicts(ar_in);

    const AlignedDays days = align_days(lstm, ar, actual);
    if (days.actual.empty()) throw DataError("no target day is covered by both methods and the price series");
    const TrendEvaluation lstm_eval = evaluate_trend(days.first, days.actual);
    const TrendEvaluation ar_eval = evaluate_trend(days.second, days.actual);

    EvalReport report;
    report.ar = {std::string(kArMethod), ar_eval.up.precision, ar_eval.up.recall, ar_eval.n_days};
    report.lstm = {std::string(kLstmMethod), lstm_eval.up.precision, lstm_eval.up.recall, lstm_eval.n_days};
    report.n_days = days.actual.size();
    report.split = {cfg.train_days, train_part.day_range()->first, train_part.day_range()->second,
                    test_part.day_range()->first, test_part.day_range()->second};
    compute_improvements(report);

    if (std::filesystem::exists(cfg.sentiment_predictions)) {
        const auto preds = load_sentiment_predictions(cfg.sentiment_predictions);
        std::vector<SentimentLabel> predicted;
        std::vector<SentimentLabel> truth;
        for (const Post& post : test_part) {
            const auto it = preds.find(post.id);
            if (!post.label || it == preds.end() || it->second.empty) continue;
            predicted.push_back(it->second.predicted);
            truth.push_back(*post.label);
        }
        if (!predicted.empty()) {
            const auto cm = confusion<SentimentLabel>(predicted, truth, {kAllLabels[0], kAllLabels[1], kAllLabels[2]});
            const PrecisionRecall pr = precision_recall(cm, SentimentLabel::Positive);
            report.sentiment = MethodResult{std::string(kLstmMethod), pr.precision, pr.recall, predicted.size()};
        }
    }
    report.config_digest = cfg.digest();

    const std::string text = render_report(report, ReportFormat::Text);
    open_out(cfg.report) << text;
    open_out(cfg.report_json) << render_report(report, ReportFormat::Json);
    out << text;
}

void cmd_gradcheck(const PipelineConfig& cfg, std::ostream& out) {
    if (cfg.gc_length < 1) throw ConfigError("gc_length must be >= 1");
    const ModelDims dims{cfg.gc_vocab, cfg.gc_embed, cfg.gc_hidden, kNumClasses};
    const SentimentModel model = init_model(dims, cfg.train.seed);
    std::mt19937_64 rng(cfg.train.seed + 1);
    std::uniform_int_distribution<std::int32_t> token(Lexicon::kOov, dims.vocab - 1);
    LabeledPost example;
    example.input.indices.resize(static_cast<std::size_t>(cfg.gc_length));
    for (auto& idx : example.input.indices) idx = token(rng);
    example.input.length = example.input.indices.size();
    example.label = class_label(std::uniform_int_distribution<int>(0, kNumClasses - 1)(rng));

    GradCheckOptions opts;
    opts.eps = cfg.gc_eps;
    opts.tol = cfg.gc_tol;
    opts.sample_seed = cfg.train.seed;
    const GradCheckReport report = grad_check(model, example, opts);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", report.max_rel_err);
    out << (report.passed ? "PASS" : "FAIL") << " max_rel_err=" << buf << " worst=" << report.worst_param
        << " checked=" << report.coordinates_checked << '\n';
    if (!report.passed) throw NumericError("gradient check failed at " + report.worst_param);
}

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Data: return "data";
        case ErrorKind::Numeric: return "numeric";
    }
    return "unknown";
}

}  // namespace

void run_or_throw(std::string_view command, const PipelineConfig& cfg, std::ostream& out) {
    static const std::map<std::string_view, void (*)(const PipelineConfig&, std::ostream&)> table = {
        {"build-lexicon", cmd_build_lexicon},
        {"encode", cmd_encode},
        {"train", cmd_train},
        {"predict-sentiment", cmd_predict_sentiment},
        {"predict-trend", cmd_predict_trend},
        {"baseline-ar", cmd_baseline_ar},
        {"evaluate", cmd_evaluate},
        {"gradcheck", cmd_gradcheck},
        {"synth", cmd_synth},
    };
    const auto it = table.find(command);
    if (it == table.end()) throw ConfigError("unknown command '" + std::string(command) + "'");
    it->second(cfg, out);
}

int run(std::string_view command, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        run_or_throw(command, cfg, out);
        return 0;
    } catch (const Error& e) {
        err << "error: code=" << e.exit_code() << " kind=" << kind_name(e.kind()) << " message=" << e.what()
            << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: code=3 kind=data message=" << e.what() << '\n';
        return 3;
    }
}

}  // namespace cryptosent
