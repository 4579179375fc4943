#include "cryptosent/eval.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cryptosent {

PrecisionRecall precision_recall_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    PrecisionRecall out{std::nullopt, std::nullopt, tp, fp, fn};
    if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return out;
}

double relative_improvement(double new_rate, double baseline_rate) {
    if (!(baseline_rate > 0.0)) throw DataError("relative improvement needs a positive baseline rate");
    return 100.0 * (new_rate - baseline_rate) / baseline_rate;
}

std::string format_percent(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", percent);
    std::string s(buf);
    return s == "-0.0%" ? "0.0%" : s;
}

std::string format_rate(std::optional<double> rate) { return rate ? format_percent(100.0 * *rate) : "n/a"; }

TrendEvaluation evaluate_trend(std::span<const DayVerdict> predictions, std::span<const DayTrend> actual) {
    if (predictions.size() != actual.size())
        throw DataError("trend evaluation: " + std::to_string(predictions.size()) + " predictions vs " +
                        std::to_string(actual.size()) + " actual days");
    TrendEvaluation out;
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        if (predictions[k].target_day != actual[k].day)
            throw DataError("trend evaluation: prediction for day " + std::to_string(predictions[k].target_day) +
                            " aligned with actual day " + std::to_string(actual[k].day));
        if (actual[k].trend == Trend::Flat)
            throw DataError("trend evaluation: Flat day " + std::to_string(actual[k].day) + " must be excluded");
        out.matrix.add(predictions[k].verdict, to_verdict(actual[k].trend));
    }
    out.n_days = predictions.size();
    if (out.n_days > 0) out.up = precision_recall(out.matrix, Verdict::Up);
    return out;
}

AlignedDays align_days(std::span<const DayVerdict> first, std::span<const DayVerdict> second,
                       std::span<const DayTrend> actual) {
    std::map<int, Verdict> a;
    std::map<int, Verdict> b;
    for (const DayVerdict& d : first) a[d.target_day] = d.verdict;
    for (const DayVerdict& d : second) b[d.target_day] = d.verdict;
    AlignedDays out;
    std::vector<DayTrend> sorted(actual.begin(), actual.end());
    std::sort(sorted.begin(), sorted.end(), [](const DayTrend& x, const DayTrend& y) { return x.day < y.day; });
    for (const DayTrend& t : sorted) {
        if (t.trend == Trend::Flat) continue;
        const auto ia = a.find(t.day);
        const auto ib = b.find(t.day);
        if (ia == a.end() || ib == b.end()) continue;
        out.first.push_back({t.day, ia->second});
        out.second.push_back({t.day, ib->second});
        out.actual.push_back(t);
    }
    return out;
}

void compute_improvements(EvalReport& report) {
    report.improvement_precision_pct.reset();
    report.improvement_recall_pct.reset();
    if (report.lstm.precision && report.ar.precision && *report.ar.precision > 0.0)
        report.improvement_precision_pct = relative_improvement(*report.lstm.precision, *report.ar.precision);
    if (report.lstm.recall && report.ar.recall && *report.ar.recall > 0.0)
        report.improvement_recall_pct = relative_improvement(*report.lstm.recall, *report.ar.recall);
}

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

json method_json(const MethodResult& m, const char* count_key) {
    return {{"method", m.method},
            {"precision", optional_number(m.precision)},
            {"recall", optional_number(m.recall)},
            {count_key, m.n}};
}

MethodResult method_from_json(const json& j, const char* count_key) {
    return {j.at("method").get<std::string>(), read_optional(j, "precision"), read_optional(j, "recall"),
            j.at(count_key).get<std::size_t>()};
}

std::string pad(std::string s, std::size_t width) {
    // Column widths are counted in bytes; every cell here is ASCII.
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string render_text(const EvalReport& r) {
    std::ostringstream out;
    const std::size_t w0 = 26;
    const std::size_t w1 = 11;
    out << pad("Method", w0) << pad("Precision", w1) << "Recall\n";
    out << pad(std::string(kArMethod), w0) << pad(format_rate(r.ar.precision), w1) << format_rate(r.ar.recall)
        << '\n';
    out << pad(std::string(kLstmMethod), w0) << pad(format_rate(r.lstm.precision), w1)
        << format_rate(r.lstm.recall) << '\n';
    auto improvement = [](const std::optional<double>& v) { return v ? format_percent(*v) : std::string("n/a"); };
    out << '\n'
        << "Improvement over " << kArMethod << ": precision " << improvement(r.improvement_precision_pct)
        << ", recall " << improvement(r.improvement_recall_pct) << '\n';
    out << "Days evaluated: " << r.n_days << " (train days " << r.split.train_first_day << ".."
        << r.split.train_last_day << ", test days " << r.split.test_first_day << ".." << r.split.test_last_day
        << ")\n";
    if (r.sentiment)
        out << "Post sentiment (Positive class, " << r.sentiment->n << " posts): precision "
            << format_rate(r.sentiment->precision) << ", recall " << format_rate(r.sentiment->recall) << '\n';
    if (!r.config_digest.empty()) out << "Config digest: " << r.config_digest << '\n';
    return out.str();
}

}  // namespace

std::string render_report(const EvalReport& r, ReportFormat format) {
    if (format == ReportFormat::Text) return render_text(r);
    json j;
    j["methods"] = json::array({method_json(r.ar, "n_days"), method_json(r.lstm, "n_days")});
    j["improvement_precision_pct"] = optional_number(r.improvement_precision_pct);
    j["improvement_recall_pct"] = optional_number(r.improvement_recall_pct);
    j["n_days"] = r.n_days;
    j["split"] = {{"train_days", r.split.train_days},
                  {"train_first_day", r.split.train_first_day},
                  {"train_last_day", r.split.train_last_day},
                  {"test_first_day", r.split.test_first_day},
                  {"test_last_day", r.split.test_last_day}};
    j["sentiment_classification"] = r.sentiment ? method_json(*r.sentiment, "n_posts") : json(nullptr);
    j["config_digest"] = r.config_digest;
    return j.dump(2) + "\n";
}

EvalReport parse_report_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        EvalReport r;
        const json& methods = j.at("methods");
        if (!methods.is_array() || methods.size() != 2) throw DataError("report must list exactly two methods");
        r.ar = method_from_json(methods[0], "n_days");
        r.lstm = method_from_json(methods[1], "n_days");
        r.improvement_precision_pct = read_optional(j, "improvement_precision_pct");
        r.improvement_recall_pct = read_optional(j, "improvement_recall_pct");
        r.n_days = j.at("n_days").get<std::size_t>();
        const json& s = j.at("split");
        r.split = {s.at("train_days").get<int>(), s.at("train_first_day").get<int>(),
                   s.at("train_last_day").get<int>(), s.at("test_first_day").get<int>(),
                   s.at("test_last_day").get<int>()};
        if (!j.at("sentiment_classification").is_null())
            r.sentiment = method_from_json(j.at("sentiment_classification"), "n_posts");
        r.config_digest = j.at("config_digest").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

}  // namespace cryptosent
