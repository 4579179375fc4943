#include <gtest/gtest.h>

#include <sstream>

#include "cryptosent/encoder.hpp"
#include "cryptosent/error.hpp"
#include "cryptosent/sentiment.hpp"
#include "fixtures.hpp"

using namespace cryptosent;
using L = SentimentLabel;

namespace {

Lexicon tiny_lexicon() {
    Lexicon lex;
    lex.add({"新高", L::Positive, 0, std::nullopt});
    lex.add({"下车", L::Negative, 0, std::nullopt});
    lex.add({"韭菜", L::Neutral, 0, std::nullopt});
    return assign_indices(lex, Corpus{});
}

}  // namespace

TEST(Sentiment, ArgmaxTieGoesNeutral) {
    Vector v(3);
    v << 0.5, 0.5, 0.5;
    EXPECT_EQ(argmax_label(v), L::Neutral);
    v << 0.7, 0.2, 0.7;
    EXPECT_EQ(argmax_label(v), L::Neutral);
    v << 0.7, 0.2, 0.1;
    EXPECT_EQ(argmax_label(v), L::Negative);
    v << 0.1, 0.2, 0.3;
    EXPECT_EQ(argmax_label(v), L::Positive);
}

TEST(Sentiment, ZeroModelPredictsNeutral) {
    const Lexicon lex = tiny_lexicon();
    const SentimentModel m = zero_model({lex.vocab_size(), 2, 3, 3});
    const auto p = predict_post(m, lex, "新高了", 8);
    EXPECT_EQ(p.label, L::Neutral);
    ASSERT_TRUE(p.scores.has_value());
    for (double s : *p.scores) EXPECT_EQ(s, 0.5);

    const auto e = predict_post(m, lex, "！！。", 8);
    EXPECT_TRUE(e.empty);
    EXPECT_FALSE(e.scores.has_value());
    EXPECT_EQ(e.label, L::Neutral);

    const SentimentModel wrong = zero_model({lex.vocab_size() + 1, 2, 3, 3});
    EXPECT_THROW(predict_post(wrong, lex, "新高", 8), DataError);
}

TEST(Sentiment, OverfitsTinyCorpus) {
    std::vector<Post> posts;
    const char* texts[][2] = {{"新高", "1"}, {"新高！", "1"}, {"下车", "-1"}, {"下车。", "-1"}, {"韭菜", "0"}, {"韭菜 韭菜", "0"}};
    int k = 0;
    for (const auto& t : texts)
        posts.push_back({"p" + std::to_string(k++), 0, t[0], label_from_code(std::stoi(t[1])), std::nullopt});
    TrainConfig cfg;
    cfg.epochs = 150;
    cfg.batch_size = 2;
    cfg.lr = 0.5;
    cfg.embed_dim = 4;
    cfg.hidden_dim = 6;
    const Lexicon lex = tiny_lexicon();
    const TrainResult r = train(Corpus(posts), lex, cfg);
    EXPECT_EQ(predict_post(r.model, lex, "新高", cfg.max_len).label, L::Positive);
    EXPECT_EQ(predict_post(r.model, lex, "下车", cfg.max_len).label, L::Negative);
    EXPECT_EQ(r.history.epochs.back().accuracy, 1.0);
}

TEST(Sentiment, SyntheticOverfitAndDeterminism) {
    const SynthCorpus s = synth_corpus(fixtures::toy_synth_config());
    const Lexicon lex = fixtures::vocabulary_lexicon(s);
    const TrainConfig cfg = fixtures::overfit_config();
    const TrainResult a = train(s.corpus, lex, cfg);
    ASSERT_EQ(a.history.epochs.size(), 200u);
    EXPECT_GE(a.history.epochs.back().accuracy, 0.99);
    EXPECT_LT(a.history.epochs.back().loss, a.history.epochs.front().loss);

    TrainConfig short_cfg = cfg;
    short_cfg.epochs = 5;
    const TrainResult x = train(s.corpus, lex, short_cfg), y = train(s.corpus, lex, short_cfg);
    std::ostringstream cx, cy;
    write_checkpoint(cx, x.model);
    write_checkpoint(cy, y.model);
    EXPECT_EQ(cx.str(), cy.str());
}

TEST(Sentiment, TrainRejectsBadInput) {
    const Lexicon lex = tiny_lexicon();
    const Corpus unlabeled({{"a", 0, "新高", std::nullopt, std::nullopt}});
    EXPECT_THROW(train(unlabeled, lex, TrainConfig{}), DataError);
    TrainConfig bad;
    bad.epochs = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = TrainConfig{};
    bad.lr = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Sentiment, EmptyPostsAreSkipped) {
    const Lexicon lex = tiny_lexicon();
    const Corpus c({{"a", 0, "新高", L::Positive, std::nullopt}, {"b", 0, "！！", L::Negative, std::nullopt}});
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.embed_dim = 2;
    cfg.hidden_dim = 2;
    EXPECT_EQ(train(c, lex, cfg).history.skipped_empty, 1u);
}
