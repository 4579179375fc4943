#include <gtest/gtest.h>

#include <random>

#include "cryptosent/error.hpp"
#include "cryptosent/eval.hpp"

using namespace cryptosent;

namespace {

EvalReport table_report() {
    EvalReport r;
    r.ar = {std::string(kArMethod), 0.734, 0.802, 100};
    r.lstm = {std::string(kLstmMethod), 0.870, 0.925, 100};
    r.n_days = 100;
    r.split = {7, 0, 6, 7, 7};
    r.config_digest = "fnv1a64:0000000000000001";
    compute_improvements(r);
    return r;
}

}  // namespace

TEST(Eval, ConfusionTally) {
    const std::vector<Verdict> pred = {Verdict::Up, Verdict::Up, Verdict::Down};
    const std::vector<Verdict> act = {Verdict::Up, Verdict::Down, Verdict::Down};
    const auto cm = confusion<Verdict>(pred, act, {Verdict::Up, Verdict::Down});
    EXPECT_EQ(cm.true_positives(Verdict::Up), 1u);
    EXPECT_EQ(cm.false_positives(Verdict::Up), 1u);
    EXPECT_EQ(cm.false_negatives(Verdict::Up), 0u);
    EXPECT_EQ(cm.true_negatives(Verdict::Up), 1u);

    const auto diag = confusion<Verdict>(act, act, {Verdict::Up, Verdict::Down});
    EXPECT_EQ(diag.count(Verdict::Up, Verdict::Down) + diag.count(Verdict::Down, Verdict::Up), 0u);

    const auto empty = confusion<Verdict>(std::vector<Verdict>{}, std::vector<Verdict>{}, {Verdict::Up});
    EXPECT_EQ(empty.total(), 0u);
    EXPECT_THROW(precision_recall(empty, Verdict::Up), DataError);
    EXPECT_THROW((confusion<Verdict>(pred, std::vector<Verdict>{Verdict::Up}, {Verdict::Up, Verdict::Down})), DataError);
}

TEST(Eval, PrecisionRecallCounts) {
    auto a = precision_recall_from_counts(3, 1, 0);
    EXPECT_DOUBLE_EQ(*a.precision, 0.75);
    EXPECT_DOUBLE_EQ(*a.recall, 1.0);
    EXPECT_FALSE(precision_recall_from_counts(0, 0, 4).precision.has_value());
    auto t = precision_recall_from_counts(87, 13, 7);
    EXPECT_DOUBLE_EQ(*t.precision, 0.87);
    EXPECT_NEAR(*t.recall, 0.9255, 5e-5);
    EXPECT_EQ(format_rate(t.precision), "87.0%");
    EXPECT_EQ(format_rate(t.recall), "92.6%");
}

TEST(Eval, PrecisionRecallMatchesBruteForce) {
    std::mt19937_64 rng(17);
    const std::vector<Verdict> classes = {Verdict::Up, Verdict::Down, Verdict::Abstain};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        std::vector<Verdict> pred(n), act(n);
        for (std::size_t k = 0; k < n; ++k) {
            pred[k] = classes[rng() % 3];
            act[k] = classes[rng() % 2];
        }
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t k = 0; k < n; ++k) {
            tp += pred[k] == Verdict::Up && act[k] == Verdict::Up;
            fp += pred[k] == Verdict::Up && act[k] != Verdict::Up;
            fn += pred[k] != Verdict::Up && act[k] == Verdict::Up;
        }
        const auto cm = confusion<Verdict>(pred, act, classes);
        const auto pr = precision_recall(cm, Verdict::Up);
        EXPECT_EQ(pr.tp, tp);
        EXPECT_EQ(pr.fp, fp);
        EXPECT_EQ(pr.fn, fn);
        if (tp + fp) EXPECT_EQ(*pr.precision, static_cast<double>(tp) / (tp + fp));
        else EXPECT_FALSE(pr.precision);
        if (tp + fn) EXPECT_EQ(*pr.recall, static_cast<double>(tp) / (tp + fn));
        else EXPECT_FALSE(pr.recall);
        if (pr.precision) EXPECT_TRUE(*pr.precision >= 0 && *pr.precision <= 1);
        std::size_t sum = 0;
        for (Verdict p : classes)
            for (Verdict a : classes) sum += cm.count(p, a);
        EXPECT_EQ(sum, n);
    }
}

TEST(Eval, RelativeImprovement) {
    EXPECT_EQ(format_percent(relative_improvement(0.870, 0.734)), "18.5%");
    EXPECT_NEAR(relative_improvement(0.925, 0.802), 15.34, 5e-3);
    EXPECT_EQ(format_percent(relative_improvement(0.925, 0.802)), "15.3%");
    EXPECT_EQ(format_percent(relative_improvement(0.5, 0.5)), "0.0%");
    EXPECT_THROW(relative_improvement(0.5, 0.0), DataError);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double base = u(rng), d = u(rng) * 0.5;
        EXPECT_GT(relative_improvement(base + d, base), 0.0);
        EXPECT_LT(relative_improvement(base - d * base, base), 0.0);
        EXPECT_EQ(relative_improvement(base, base), 0.0);
    }
}

TEST(Eval, EvaluateTrend) {
    auto pr = [](std::vector<Verdict> v, std::vector<Trend> t) {
        std::vector<DayVerdict> p;
        std::vector<DayTrend> a;
        for (std::size_t k = 0; k < v.size(); ++k) p.push_back({static_cast<int>(k), v[k]}), a.push_back({static_cast<int>(k), t[k]});
        return evaluate_trend(p, a).up;
    };
    auto one = pr({Verdict::Up}, {Trend::Up});
    EXPECT_EQ(*one.precision, 1.0);
    EXPECT_EQ(*one.recall, 1.0);
    auto abstain = pr({Verdict::Abstain}, {Trend::Up});
    EXPECT_EQ(abstain.fn, 1u);
    EXPECT_EQ(*abstain.recall, 0.0);
    EXPECT_FALSE(abstain.precision);
    auto fp = pr({Verdict::Up, Verdict::Down}, {Trend::Down, Trend::Down});
    EXPECT_EQ(fp.fp, 1u);
    EXPECT_EQ(*fp.precision, 0.0);

    const std::vector<DayVerdict> p = {{1, Verdict::Up}};
    const std::vector<DayTrend> a = {{2, Trend::Up}};
    EXPECT_THROW(evaluate_trend(p, a), DataError);
    const std::vector<DayTrend> flat = {{1, Trend::Flat}};
    EXPECT_THROW(evaluate_trend(p, flat), DataError);
}

TEST(Eval, AlignDays) {
    const std::vector<DayVerdict> a = {{1, Verdict::Up}, {2, Verdict::Down}, {3, Verdict::Up}};
    const std::vector<DayVerdict> b = {{2, Verdict::Up}, {3, Verdict::Abstain}, {4, Verdict::Up}};
    const std::vector<DayTrend> t = {{2, Trend::Up}, {3, Trend::Flat}, {4, Trend::Down}};
    const auto al = align_days(a, b, t);
    ASSERT_EQ(al.actual.size(), 1u);
    EXPECT_EQ(al.actual[0].day, 2);
    EXPECT_EQ(al.first[0].verdict, Verdict::Down);
    EXPECT_EQ(al.second[0].verdict, Verdict::Up);
}

TEST(Eval, TextReportMirrorsTable) {
    const std::string text = render_report(table_report(), ReportFormat::Text);
    const auto ar_line = text.find(std::string(kArMethod));
    const auto lstm_line = text.find(std::string(kLstmMethod));
    ASSERT_NE(ar_line, std::string::npos);
    ASSERT_NE(lstm_line, std::string::npos);
    const std::string ar_row = text.substr(ar_line, text.find('\n', ar_line) - ar_line);
    const std::string lstm_row = text.substr(lstm_line, text.find('\n', lstm_line) - lstm_line);
    EXPECT_NE(ar_row.find("73.4%"), std::string::npos);
    EXPECT_NE(ar_row.find("80.2%"), std::string::npos);
    EXPECT_NE(lstm_row.find("87.0%"), std::string::npos);
    EXPECT_NE(lstm_row.find("92.5%"), std::string::npos);
    EXPECT_NE(text.find("18.5%"), std::string::npos);
}

TEST(Eval, UndefinedRateIsNotZero) {
    EvalReport r = table_report();
    r.ar.precision.reset();
    compute_improvements(r);
    EXPECT_FALSE(r.improvement_precision_pct);
    const std::string text = render_report(r, ReportFormat::Text);
    const auto ar_line = text.find(std::string(kArMethod));
    const std::string ar_row = text.substr(ar_line, text.find('\n', ar_line) - ar_line);
    EXPECT_NE(ar_row.find("n/a"), std::string::npos);
    EXPECT_EQ(ar_row.find("0.0%"), std::string::npos);
    EXPECT_EQ(format_rate(std::nullopt), "n/a");
}

TEST(Eval, JsonRoundTrip) {
    EvalReport r = table_report();
    r.ar.precision = 0.1 + 0.2;
    r.sentiment = MethodResult{"sentiment", 0.9, std::nullopt, 33};
    compute_improvements(r);
    EXPECT_EQ(parse_report_json(render_report(r, ReportFormat::Json)), r);
    EXPECT_THROW(parse_report_json("{not json"), DataError);
}
