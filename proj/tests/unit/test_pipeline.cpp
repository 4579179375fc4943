#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cryptosent/error.hpp"
#include "cryptosent/pipeline.hpp"

using namespace cryptosent;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

PipelineConfig small_config(const fs::path& dir) {
    std::istringstream in(
        "# quick run\n"
        "n_days = 12\n"
        "posts_per_day = 10\n"
        "train_days = 8\n"
        "epochs = 2\n"
        "embed_dim = 4\n"
        "hidden_dim = 6\n"
        "ar_order = 1\n");
    PipelineConfig cfg = parse_config(in);
    rebase_paths(cfg, dir);
    return cfg;
}

}  // namespace

TEST(Pipeline, ConfigParsing) {
    std::istringstream in("epochs = 3\n  lr=0.25  \n# comment\n\nreturn_mode = simple\nseed = 11\n");
    const PipelineConfig cfg = parse_config(in);
    EXPECT_EQ(cfg.train.epochs, 3);
    EXPECT_EQ(cfg.train.lr, 0.25);
    EXPECT_EQ(cfg.return_mode, ReturnMode::Simple);
    EXPECT_EQ(cfg.train.seed, 11u);
    EXPECT_EQ(cfg.synth.seed, 11u);

    PipelineConfig c;
    EXPECT_THROW(c.set("no_such_key", "1"), ConfigError);
    EXPECT_THROW(c.set("epochs", "many"), ConfigError);
    std::istringstream bad("epochs 3\n");
    EXPECT_THROW(parse_config(bad), ConfigError);
    for (const auto& key : PipelineConfig::keys()) EXPECT_FALSE(key.empty());
}

TEST(Pipeline, DigestIgnoresPaths) {
    PipelineConfig a, b;
    b.report = "elsewhere/report.txt";
    EXPECT_EQ(a.digest(), b.digest());
    b.set("epochs", "21");
    EXPECT_NE(a.digest(), b.digest());
    EXPECT_EQ(a.digest().rfind("fnv1a64:", 0), 0u);
}

TEST(Pipeline, UnknownCommandIsUsageError) {
    std::ostringstream out, err;
    EXPECT_EQ(run("fly", PipelineConfig{}, out, err), 2);
    EXPECT_NE(err.str().find("error: code=2 kind=usage"), std::string::npos);
}

TEST(Pipeline, GradcheckPasses) {
    std::ostringstream out, err;
    EXPECT_EQ(run("gradcheck", PipelineConfig{}, out, err), 0) << err.str();
    EXPECT_EQ(out.str().rfind("PASS max_rel_err=", 0), 0u) << out.str();
}

TEST(Pipeline, MissingInputIsDataError) {
    PipelineConfig cfg;
    cfg.corpus = "/nonexistent/corpus.tsv";
    std::ostringstream out, err;
    EXPECT_EQ(run("build-lexicon", cfg, out, err), 3);
    EXPECT_EQ(err.str().find('\n'), err.str().size() - 1);
}

TEST(Pipeline, SmallRunIsIdempotent) {
    const fs::path dir = fs::temp_directory_path() / "cryptosent_pipeline_unit";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const PipelineConfig cfg = small_config(dir);
    const std::vector<std::string> steps = {"synth", "build-lexicon", "train", "predict-sentiment",
                                            "predict-trend", "baseline-ar", "evaluate"};
    std::map<std::string, std::string> first;
    for (int round = 0; round < 2; ++round) {
        for (const auto& step : steps) {
            std::ostringstream out, err;
            ASSERT_EQ(run(step, cfg, out, err), 0) << step << ": " << err.str();
        }
        for (const fs::path& p : {cfg.lexicon, cfg.checkpoint, cfg.report, cfg.report_json, cfg.trend_predictions}) {
            if (round == 0) first[p.string()] = slurp(p);
            else EXPECT_EQ(slurp(p), first[p.string()]) << p;
        }
    }
    const std::string report = slurp(cfg.report);
    EXPECT_NE(report.find("Auto Regression"), std::string::npos);
    EXPECT_NE(report.find("LSTM Sentiment Analyzer"), std::string::npos);
    fs::remove_all(dir);
}
