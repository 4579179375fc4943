#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cryptosent/corpus.hpp"

namespace cryptosent {

struct PricePoint {
    int day = 0;
    double close = 0.0;

    friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

/// Daily closes; days strictly increasing, closes finite and positive.
class PriceSeries {
public:
    PriceSeries() = default;
    explicit PriceSeries(std::vector<PricePoint> points);

    const std::vector<PricePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::optional<double> close_on(int day) const;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::vector<PricePoint> points_;
};

PriceSeries parse_prices(std::istream& in);
PriceSeries load_prices(const std::filesystem::path& path);
void write_prices(std::ostream& out, const PriceSeries& series);
void save_prices(const std::filesystem::path& path, const PriceSeries& series);

enum class Trend { Up, Down, Flat };
enum class Verdict { Up, Down, Abstain };

const char* trend_name(Trend t);
const char* verdict_name(Verdict v);
Verdict verdict_from_name(std::string_view name);
/// Flat maps to Abstain.
Verdict to_verdict(Trend t);

struct DayTrend {
    int day;  // the later day of the pair
    Trend trend;

    friend bool operator==(const DayTrend&, const DayTrend&) = default;
};

std::vector<DayTrend> trend_labels(const PriceSeries& series);
std::vector<DayTrend> drop_flat(std::span<const DayTrend> trends);

/// A method's call for one target day.
struct DayVerdict {
    int target_day;
    Verdict verdict;

    friend bool operator==(const DayVerdict&, const DayVerdict&) = default;
};

struct TrendPrediction {
    int target_day = 0;
    Verdict verdict = Verdict::Abstain;
    std::size_t pos_votes = 0;
    std::size_t neg_votes = 0;
    std::size_t neutral_votes = 0;

    DayVerdict day_verdict() const { return {target_day, verdict}; }
    friend bool operator==(const TrendPrediction&, const TrendPrediction&) = default;
};

/// Positive vs Negative counts decide; Neutral is tallied but does not vote.
/// Equal counts (and an empty window) abstain.
TrendPrediction majority_vote(std::span<const SentimentLabel> window, int target_day);

enum class ReturnMode { Log, Simple };

ReturnMode return_mode_from_name(std::string_view name);
const char* return_mode_name(ReturnMode mode);

/// r_k relates close k+1 to close k.
std::vector<double> compute_returns(const PriceSeries& series, ReturnMode mode);

struct ArModel {
    int order = 0;
    std::vector<double> coefficients;  // phi_1..phi_p; phi_1 multiplies the latest return
    double intercept = 0.0;
};

inline constexpr int kDefaultArOrder = 2;
inline constexpr int kMaxArOrder = 10;

/// Conditional least squares on (1, r_{t-1}, ..., r_{t-p}). Throws
/// NumericError for a singular design and DataError for too few observations.
ArModel fit_ar(std::span<const double> returns, int order);

struct ArForecast {
    double predicted_return;
    Trend trend;
};

/// `recent` is chronological: recent.back() is the latest return.
ArForecast ar_predict(const ArModel& model, std::span<const double> recent);

struct ArDayForecast {
    int target_day;
    double predicted_return;
    Trend trend;
};

struct ArBaseline {
    ArModel model;
    std::vector<ArDayForecast> forecasts;
};

/// Fits on returns ending at or before `boundary_day`, then forecasts one step
/// ahead for every later day using the observed returns preceding it.
ArBaseline run_ar_baseline(const PriceSeries& series, int order, ReturnMode mode, int boundary_day);

void write_trend_predictions(std::ostream& out, std::span<const TrendPrediction> predictions);
std::vector<TrendPrediction> parse_trend_predictions(std::istream& in);
void write_ar_forecasts(std::ostream& out, std::span<const ArDayForecast> forecasts);
std::vector<DayVerdict> parse_ar_verdicts(std::istream& in);

}  // namespace cryptosent
