#include "cryptosent/market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "cryptosent/error.hpp"

namespace cryptosent {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string_view::npos; start = pos + 1)
        fields.push_back(line.substr(start, pos - start));
    fields.push_back(line.substr(start));
    return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view field) {
    T value{};
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, value);
    if (field.empty() || ec != std::errc() || ptr != last) return std::nullopt;
    return value;
}

void write_double(std::ostream& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

PriceSeries::PriceSeries(std::vector<PricePoint> points) : points_(std::move(points)) {
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (!(points_[k].close > 0.0) || !std::isfinite(points_[k].close))
            throw DataError("price on day " + std::to_string(points_[k].day) + " is not a positive close");
        if (k > 0 && points_[k].day <= points_[k - 1].day)
            throw DataError("price days must be strictly increasing (day " + std::to_string(points_[k].day) + ")");
    }
}

std::optional<double> PriceSeries::close_on(int day) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), day,
                                     [](const PricePoint& p, int d) { return p.day < d; });
    if (it == points_.end() || it->day != day) return std::nullopt;
    return it->close;
}

PriceSeries parse_prices(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "day,close")
        throw DataError("price file must start with header 'day,close'");
    std::vector<PricePoint> points;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_commas(line);
        const auto day = fields.size() == 2 ? parse_number<int>(fields[0]) : std::nullopt;
        const auto close = fields.size() == 2 ? parse_number<double>(fields[1]) : std::nullopt;
        if (!day || !close) throw DataError("price line " + std::to_string(line_no) + ": expected 'day,close'");
        points.push_back({*day, *close});
    }
    return PriceSeries(std::move(points));
}

PriceSeries load_prices(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open price file " + path.string());
    return parse_prices(in);
}

void write_prices(std::ostream& out, const PriceSeries& series) {
    out << "day,close\n";
    for (const PricePoint& p : series.points()) {
        out << p.day << ',';
        write_double(out, p.close);
        out << '\n';
    }
}

void save_prices(const std::filesystem::path& path, const PriceSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write price file " + path.string());
    write_prices(out, series);
}

const char* trend_name(Trend t) {
    switch (t) {
        case Trend::Up: return "Up";
        case Trend::Down: return "Down";
        case Trend::Flat: return "Flat";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Up: return "Up";
        case Verdict::Down: return "Down";
        case Verdict::Abstain: return "Abstain";
    }
    return "?";
}

Verdict verdict_from_name(std::string_view name) {
    if (name == "Up") return Verdict::Up;
    if (name == "Down") return Verdict::Down;
    if (name == "Abstain") return Verdict::Abstain;
    throw DataError("unknown verdict '" + std::string(name) + "'");
}

Verdict to_verdict(Trend t) {
    switch (t) {
        case Trend::Up: return Verdict::Up;
        case Trend::Down: return Verdict::Down;
        case Trend::Flat: break;
    }
    return Verdict::Abstain;
}

std::vector<DayTrend> trend_labels(const PriceSeries& series) {
    if (series.size() < 2) throw DataError("trend labels need at least two closes");
    const auto& pts = series.points();
    std::vector<DayTrend> out;
    out.reserve(pts.size() - 1);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double prev = pts[k - 1].close;
        const double next = pts[k].close;
        out.push_back({pts[k].day, next > prev ? Trend::Up : next < prev ? Trend::Down : Trend::Flat});
    }
    return out;
}

std::vector<DayTrend> drop_flat(std::span<const DayTrend> trends) {
    std::vector<DayTrend> out;
    std::copy_if(trends.begin(), trends.end(), std::back_inserter(out),
                 [](const DayTrend& t) { return t.trend != Trend::Flat; });
    return out;
}

TrendPrediction majority_vote(std::span<const SentimentLabel> window, int target_day) {
    TrendPrediction out;
    out.target_day = target_day;
    for (SentimentLabel l : window) {
        switch (l) {
            case SentimentLabel::Positive: ++out.pos_votes; break;
            case SentimentLabel::Negative: ++out.neg_votes; break;
            case SentimentLabel::Neutral: ++out.neutral_votes; break;
        }
    }
    out.verdict = out.pos_votes > out.neg_votes   ? Verdict::Up
                  : out.neg_votes > out.pos_votes ? Verdict::Down
                                                  : Verdict::Abstain;
    return out;
}

ReturnMode return_mode_from_name(std::string_view name) {
    if (name == "log") return ReturnMode::Log;
    if (name == "simple") return ReturnMode::Simple;
    throw ConfigError("return_mode must be 'log' or 'simple'");
}

const char* return_mode_name(ReturnMode mode) { return mode == ReturnMode::Log ? "log" : "simple"; }

std::vector<double> compute_returns(const PriceSeries& series, ReturnMode mode) {
    if (series.size() < 2) throw DataError("returns need at least two closes");
    const auto& pts = series.points();
    std::vector<double> out;
    out.reserve(pts.size() - 1);
    for (std::size_t k = 1; k < pts.size(); ++k)
        out.push_back(mode == ReturnMode::Log ? std::log(pts[k].close / pts[k - 1].close)
                                              : pts[k].close - pts[k - 1].close);
    return out;
}

ArModel fit_ar(std::span<const double> returns, int order) {
    if (order < 1 || order > kMaxArOrder) throw ConfigError("AR order must lie in [1, 10]");
    const auto p = static_cast<std::size_t>(order);
    if (returns.size() < 2 * p + 1)
        throw DataError("AR(" + std::to_string(order) + ") needs at least " + std::to_string(2 * p + 1) +
                        " returns, got " + std::to_string(returns.size()));

    // Normal equations A x = b for x = (intercept, phi_1..phi_p).
    const std::size_t n = p + 1;
    std::vector<double> a(n * n, 0.0);
    std::vector<double> b(n, 0.0);
    std::vector<double> row(n);
    for (std::size_t t = p; t < returns.size(); ++t) {
        row[0] = 1.0;
        for (std::size_t k = 1; k <= p; ++k) row[k] = returns[t - k];
        for (std::size_t i = 0; i < n; ++i) {
            b[i] += row[i] * returns[t];
            for (std::size_t j = 0; j < n; ++j) a[i * n + j] += row[i] * row[j];
        }
    }

    // Gaussian elimination with partial pivoting.
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-12 * scale;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (!(std::abs(a[pivot * n + col]) > tiny)) throw NumericError("singular AR design matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r * n + col] / a[col * n + col];
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[r * n + j] -= factor * a[col * n + j];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }

    ArModel model;
    model.order = order;
    model.intercept = x[0];
    model.coefficients.assign(x.begin() + 1, x.end());
    return model;
}

ArForecast ar_predict(const ArModel& model, std::span<const double> recent) {
    if (recent.size() != static_cast<std::size_t>(model.order))
        throw DataError("AR prediction needs exactly " + std::to_string(model.order) + " recent returns");
    double r = model.intercept;
    for (std::size_t k = 0; k < model.coefficients.size(); ++k) r += model.coefficients[k] * recent[recent.size() - 1 - k];
    return {r, r > 0.0 ? Trend::Up : r < 0.0 ? Trend::Down : Trend::Flat};
}

ArBaseline run_ar_baseline(const PriceSeries& series, int order, ReturnMode mode, int boundary_day) {
    const auto returns = compute_returns(series, mode);
    const auto& pts = series.points();
    // returns[k] belongs to day pts[k + 1].day
    std::size_t n_fit = 0;
    while (n_fit < returns.size() && pts[n_fit + 1].day <= boundary_day) ++n_fit;

    ArBaseline out;
    out.model = fit_ar(std::span<const double>(returns.data(), n_fit), order);
    const auto p = static_cast<std::size_t>(order);
    for (std::size_t k = std::max(n_fit, p); k < returns.size(); ++k) {
        const ArForecast f = ar_predict(out.model, std::span<const double>(returns.data() + k - p, p));
        out.forecasts.push_back({pts[k + 1].day, f.predicted_return, f.trend});
    }
    return out;
}

void write_trend_predictions(std::ostream& out, std::span<const TrendPrediction> predictions) {
    out << "target_day,verdict,pos_votes,neg_votes,neutral_votes\n";
    for (const TrendPrediction& p : predictions)
        out << p.target_day << ',' << verdict_name(p.verdict) << ',' << p.pos_votes << ',' << p.neg_votes << ','
            << p.neutral_votes << '\n';
}

std::vector<TrendPrediction> parse_trend_predictions(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "target_day,verdict,pos_votes,neg_votes,neutral_votes")
        throw DataError("trend prediction file has an unexpected header");
    std::vector<TrendPrediction> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_commas(line);
        const std::string where = "trend prediction line " + std::to_string(line_no);
        if (f.size() != 5) throw DataError(where + ": expected 5 fields");
        const auto day = parse_number<int>(f[0]);
        const auto pos = parse_number<std::size_t>(f[2]);
        const auto neg = parse_number<std::size_t>(f[3]);
        const auto neu = parse_number<std::size_t>(f[4]);
        if (!day || !pos || !neg || !neu) throw DataError(where + ": bad number");
        out.push_back({*day, verdict_from_name(f[1]), *pos, *neg, *neu});
    }
    return out;
}

void write_ar_forecasts(std::ostream& out, std::span<const ArDayForecast> forecasts) {
    out << "target_day,predicted_return,verdict\n";
    for (const ArDayForecast& f : forecasts) {
        out << f.target_day << ',';
        write_double(out, f.predicted_return);
        out << ',' << verdict_name(to_verdict(f.trend)) << '\n';
    }
}

std::vector<DayVerdict> parse_ar_verdicts(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "target_day,predicted_return,verdict")
        throw DataError("AR forecast file has an unexpected header");
    std::vector<DayVerdict> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_commas(line);
        const auto day = f.size() == 3 ? parse_number<int>(f[0]) : std::nullopt;
        if (!day) throw DataError("AR forecast line " + std::to_string(line_no) + ": malformed");
        out.push_back({*day, verdict_from_name(f[2])});
    }
    return out;
}

}  // namespace cryptosent
