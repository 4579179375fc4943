#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cryptosent/encoder.hpp"
#include "cryptosent/error.hpp"
#include "cryptosent/lexicon.hpp"
#include "cryptosent/utf8.hpp"

using namespace cryptosent;
using L = SentimentLabel;

namespace {

Post ranked(std::string id, std::string text, int rank) {
    return {std::move(id), 0, std::move(text), std::nullopt, rank};
}

const std::vector<Seed> kSeeds = {{"新高", L::Positive}, {"下车", L::Negative}};

// Every code-point substring of length 1..4, counted per side.
std::set<std::string> oracle_candidates(const std::vector<Post>& posts, const std::set<std::string>& known,
                                        int min_freq, double purity) {
    std::map<std::string, std::pair<int, int>> counts;
    for (const Post& p : posts) {
        if (!p.rank || std::abs(*p.rank) < 2) continue;
        const auto units = utf8::decode(p.text);
        for (std::size_t i = 0; i < units.size(); ++i)
            for (std::size_t n = 1; n <= 4 && i + n <= units.size(); ++n) {
                const std::size_t begin = units[i].offset;
                const std::size_t end = units[i + n - 1].offset + units[i + n - 1].width;
                auto& c = counts[p.text.substr(begin, end - begin)];
                (*p.rank > 0 ? c.first : c.second) += 1;
            }
    }
    std::set<std::string> out;
    for (const auto& [s, c] : counts) {
        const int total = c.first + c.second;
        if (known.count(s) || total < min_freq) continue;
        if (static_cast<double>(std::max(c.first, c.second)) / total >= purity) out.insert(s);
    }
    return out;
}

Lexicon with_frequencies(std::initializer_list<std::pair<const char*, std::size_t>> items) {
    Lexicon lex;
    for (const auto& [s, f] : items) lex.add({s, L::Neutral, f, std::nullopt});
    return lex;
}

// Corpus where each surface appears exactly `count` times as a standalone token.
Corpus repeat_corpus(std::initializer_list<std::pair<const char*, int>> items) {
    std::vector<Post> posts;
    for (const auto& [s, n] : items)
        for (int k = 0; k < n; ++k) posts.push_back({std::string(s) + std::to_string(k), 0, std::string(s) + "，", std::nullopt, std::nullopt});
    return Corpus(posts);
}

}  // namespace

TEST(Lexicon, SeedsKeepTheirPolarity) {
    const Corpus corpus({ranked("a", "新高来了", 2), ranked("b", "下车吧", -2)});
    const Lexicon lex = build_lexicon(corpus, kSeeds, BootstrapConfig{});
    ASSERT_TRUE(lex.contains("新高"));
    ASSERT_TRUE(lex.contains("下车"));
    EXPECT_EQ(lex.find("新高")->polarity, L::Positive);
    EXPECT_EQ(lex.find("下车")->polarity, L::Negative);
    EXPECT_TRUE(lex.indexed());
}

TEST(Lexicon, ToyBootstrapMatchesBruteForce) {
    const std::vector<Post> posts = {ranked("P1", "新高暴涨", 2), ranked("P2", "下车暴跌", -2)};
    BootstrapConfig cfg;
    cfg.min_candidate_freq = 1;
    BootstrapTrace trace;
    const Lexicon lex = build_lexicon(Corpus(posts), kSeeds, cfg, &trace);

    ASSERT_TRUE(lex.contains("暴涨"));
    ASSERT_TRUE(lex.contains("暴跌"));
    EXPECT_EQ(lex.find("暴涨")->polarity, L::Positive);
    EXPECT_EQ(lex.find("暴跌")->polarity, L::Negative);
    EXPECT_FALSE(lex.contains("暴"));  // appears on both sides

    const auto expected = oracle_candidates(posts, {"新高", "下车"}, 1, 0.8);
    std::set<std::string> added;
    for (const auto& e : lex.entries())
        if (e.surface != "新高" && e.surface != "下车") added.insert(e.surface);
    EXPECT_EQ(added, expected);
    EXPECT_TRUE(trace.converged);
}

TEST(Lexicon, UnrankedCorpusYieldsSeedsOnly) {
    const Corpus corpus({ranked("a", "新高暴涨", 0), ranked("b", "下车暴跌", 0)});
    BootstrapTrace trace;
    const Lexicon lex = build_lexicon(corpus, kSeeds, BootstrapConfig{}, &trace);
    EXPECT_EQ(lex.size(), 2u);
    EXPECT_TRUE(trace.converged);
    ASSERT_FALSE(trace.added_per_iteration.empty());
    EXPECT_EQ(trace.added_per_iteration.front(), 0u);

    Lexicon seeds_only;
    seeds_only.add({"新高", L::Positive, 0, std::nullopt});
    EXPECT_TRUE(bootstrap_iteration(corpus, seeds_only, BootstrapConfig{}).empty());
}

TEST(Lexicon, BuildErrors) {
    const Corpus corpus({ranked("a", "新高", 2)});
    EXPECT_THROW(build_lexicon(corpus, {}, BootstrapConfig{}), DataError);
    const Corpus unranked({{"a", 0, "新高", L::Positive, std::nullopt}});
    EXPECT_THROW(build_lexicon(unranked, kSeeds, BootstrapConfig{}), DataError);
    BootstrapConfig bad;
    bad.purity_min = 0.5;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Lexicon, PurityRule) {
    Lexicon lex;
    lex.add({"新高", L::Positive, 0, std::nullopt});
    BootstrapConfig cfg;
    cfg.min_candidate_freq = 3;

    const Corpus pure({ranked("a", "梭哈", 2), ranked("b", "梭哈", 3), ranked("c", "梭哈", 2)});
    const auto found = bootstrap_iteration(pure, lex, cfg);
    const auto it = std::find_if(found.begin(), found.end(), [](const auto& e) { return e.surface == "梭哈"; });
    ASSERT_NE(it, found.end());
    EXPECT_EQ(it->polarity, L::Positive);
    EXPECT_EQ(it->frequency, 3u);

    const Corpus mixed({ranked("a", "梭哈", 2), ranked("b", "梭哈", 2), ranked("c", "梭哈", -2), ranked("d", "梭哈", -3)});
    for (const auto& e : bootstrap_iteration(mixed, lex, cfg)) EXPECT_NE(e.surface, "梭哈");
}

TEST(Lexicon, AssignIndicesOrdering) {
    const Lexicon lex = assign_indices(with_frequencies({{"b", 0}, {"c", 0}, {"a", 0}}),
                                       repeat_corpus({{"a", 10}, {"b", 3}, {"c", 10}}));
    EXPECT_EQ(lex.find("a")->index, 2);
    EXPECT_EQ(lex.find("c")->index, 3);
    EXPECT_EQ(lex.find("b")->index, 4);
    EXPECT_EQ(lex.find("a")->frequency, 10u);

    const Lexicon single = assign_indices(with_frequencies({{"韭菜", 0}}), Corpus{});
    EXPECT_EQ(single.find("韭菜")->index, 2);

    const Lexicon tie = assign_indices(with_frequencies({{"乙", 0}, {"甲", 0}}), Corpus{});
    // 乙 is U+4E59, 甲 is U+7532
    EXPECT_EQ(tie.find("乙")->index, 2);
    EXPECT_EQ(tie.find("甲")->index, 3);
    EXPECT_EQ(tie.vocab_size(), 4);
}

TEST(Lexicon, AssignIndicesIsIdempotent) {
    const Corpus corpus = repeat_corpus({{"a", 4}, {"b", 2}, {"c", 7}});
    const Lexicon once = assign_indices(with_frequencies({{"a", 0}, {"b", 0}, {"c", 0}}), corpus);
    EXPECT_EQ(assign_indices(once, corpus), once);
}

TEST(Lexicon, FileRoundTripIsBitExact) {
    const Corpus corpus({ranked("a", "新高暴涨！", 2), ranked("b", "下车暴跌", -2), ranked("c", "韭菜新高", 3)});
    BootstrapConfig cfg;
    cfg.min_candidate_freq = 1;
    const Lexicon lex = build_lexicon(corpus, kSeeds, cfg);
    std::ostringstream out;
    write_lexicon(out, lex);
    std::istringstream in(out.str());
    const Lexicon back = parse_lexicon(in);
    EXPECT_EQ(back, lex);
    std::ostringstream again;
    write_lexicon(again, back);
    EXPECT_EQ(again.str(), out.str());
    EXPECT_EQ(out.str().rfind("#lexicon v1\n", 0), 0u);
}

TEST(Lexicon, RejectsBadFiles) {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return parse_lexicon(in);
    };
    EXPECT_THROW(parse("新高\t1\t3\t2\n"), DataError);                       // no header
    EXPECT_THROW(parse("#lexicon v1\n新高\t1\t3\t3\n"), DataError);          // index gap
    EXPECT_THROW(parse("#lexicon v1\n新高\t1\t3\t2\n新高\t1\t3\t3\n"), DataError);  // duplicate
    EXPECT_THROW(parse("#lexicon v1\n新高\t7\t3\t2\n"), DataError);          // polarity
    Lexicon lex;
    EXPECT_THROW(lex.add({"", L::Neutral, 0, std::nullopt}), DataError);
    EXPECT_THROW(lex.add({"a\tb", L::Neutral, 0, std::nullopt}), DataError);
}

TEST(Lexicon, DeterministicBuild) {
    std::mt19937_64 rng(5);
    const std::vector<std::string> words = {"新高", "暴涨", "下车", "暴跌", "韭菜", "割肉", "梭哈", "抄底"};
    std::vector<Post> posts;
    for (int i = 0; i < 60; ++i) {
        std::string text;
        for (int k = 0; k < 4; ++k) text += words[rng() % words.size()];
        posts.push_back(ranked("p" + std::to_string(i), text, static_cast<int>(rng() % 7) - 3));
    }
    const Corpus corpus(posts);
    std::ostringstream a, b;
    write_lexicon(a, build_lexicon(corpus, kSeeds, BootstrapConfig{}));
    write_lexicon(b, build_lexicon(corpus, kSeeds, BootstrapConfig{}));
    EXPECT_EQ(a.str(), b.str());
}
