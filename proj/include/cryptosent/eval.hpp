#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cryptosent/error.hpp"
#include "cryptosent/market.hpp"

namespace cryptosent {

/// Counts indexed by (predicted, actual) over a declared class set.
template <typename Class>
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<Class> classes)
        : classes_(std::move(classes)), counts_(classes_.size() * classes_.size(), 0) {}

    void add(const Class& predicted, const Class& actual) {
        ++counts_[slot(predicted) * classes_.size() + slot(actual)];
        ++total_;
    }

    std::size_t count(const Class& predicted, const Class& actual) const {
        return counts_[slot(predicted) * classes_.size() + slot(actual)];
    }

    std::size_t total() const noexcept { return total_; }
    const std::vector<Class>& classes() const noexcept { return classes_; }

    std::size_t true_positives(const Class& c) const { return count(c, c); }
    std::size_t false_positives(const Class& c) const { return predicted_as(c) - count(c, c); }
    std::size_t false_negatives(const Class& c) const { return actually(c) - count(c, c); }
    std::size_t true_negatives(const Class& c) const {
        return total_ - true_positives(c) - false_positives(c) - false_negatives(c);
    }

private:
    std::size_t slot(const Class& c) const {
        const auto it = std::find(classes_.begin(), classes_.end(), c);
        if (it == classes_.end()) throw DataError("value outside the declared class set");
        return static_cast<std::size_t>(it - classes_.begin());
    }
    std::size_t predicted_as(const Class& c) const {
        std::size_t n = 0;
        for (const Class& a : classes_) n += count(c, a);
        return n;
    }
    std::size_t actually(const Class& c) const {
        std::size_t n = 0;
        for (const Class& p : classes_) n += count(p, c);
        return n;
    }

    std::vector<Class> classes_;
    std::vector<std::size_t> counts_;
    std::size_t total_ = 0;
};

template <typename Class>
ConfusionMatrix<Class> confusion(std::span<const Class> predicted, std::span<const Class> actual,
                                 std::vector<Class> classes) {
    if (predicted.size() != actual.size())
        throw DataError("predicted and actual sequences differ in length (" + std::to_string(predicted.size()) +
                        " vs " + std::to_string(actual.size()) + ")");
    ConfusionMatrix<Class> cm(std::move(classes));
    for (std::size_t k = 0; k < predicted.size(); ++k) cm.add(predicted[k], actual[k]);
    return cm;
}

/// nullopt marks a zero denominator; undefined rates are never reported as 0.
struct PrecisionRecall {
    std::optional<double> precision;
    std::optional<double> recall;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

PrecisionRecall precision_recall_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

template <typename Class>
PrecisionRecall precision_recall(const ConfusionMatrix<Class>& cm, const Class& positive) {
    if (cm.total() == 0) throw DataError("precision/recall of an empty confusion matrix");
    return precision_recall_from_counts(cm.true_positives(positive), cm.false_positives(positive),
                                        cm.false_negatives(positive));
}

/// 100 * (new - baseline) / baseline. Throws DataError for baseline <= 0.
double relative_improvement(double new_rate, double baseline_rate);

/// One decimal place with a percent sign, e.g. "18.5%".
std::string format_percent(double percent);
/// A rate in [0, 1] as a percentage, or "n/a".
std::string format_rate(std::optional<double> rate);

struct TrendEvaluation {
    ConfusionMatrix<Verdict> matrix{{Verdict::Up, Verdict::Down, Verdict::Abstain}};
    PrecisionRecall up;
    std::size_t n_days = 0;
};

/// Positive class Up. Abstain and Down both count as "not Up". Days must align
/// pairwise and Flat actual days must already be removed.
TrendEvaluation evaluate_trend(std::span<const DayVerdict> predictions, std::span<const DayTrend> actual);

/// Keeps the target days present in both prediction sets and in `actual`
/// (non-Flat), in ascending day order.
struct AlignedDays {
    std::vector<DayVerdict> first;
    std::vector<DayVerdict> second;
    std::vector<DayTrend> actual;
};
AlignedDays align_days(std::span<const DayVerdict> first, std::span<const DayVerdict> second,
                       std::span<const DayTrend> actual);

struct MethodResult {
    std::string method;
    std::optional<double> precision;
    std::optional<double> recall;
    std::size_t n = 0;

    friend bool operator==(const MethodResult&, const MethodResult&) = default;
};

struct SplitInfo {
    int train_days = 0;
    int train_first_day = 0;
    int train_last_day = 0;
    int test_first_day = 0;
    int test_last_day = 0;

    friend bool operator==(const SplitInfo&, const SplitInfo&) = default;
};

inline constexpr std::string_view kArMethod = "Auto Regression";
inline constexpr std::string_view kLstmMethod = "LSTM Sentiment Analyzer";

struct EvalReport {
    MethodResult ar;    // day-level Up precision/recall
    MethodResult lstm;  // day-level Up precision/recall
    std::optional<double> improvement_precision_pct;
    std::optional<double> improvement_recall_pct;
    std::size_t n_days = 0;
    SplitInfo split;
    /// Post-level Positive-class metrics of the sentiment classifier, if computed.
    std::optional<MethodResult> sentiment;
    std::string config_digest;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Fills the improvement fields from the two method rows.
void compute_improvements(EvalReport& report);

enum class ReportFormat { Text, Json };

std::string render_report(const EvalReport& report, ReportFormat format);
EvalReport parse_report_json(std::string_view json);

}  // namespace cryptosent
