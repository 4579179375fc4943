#include "cryptosent/synthkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "cryptosent/error.hpp"
#include "cryptosent/utf8.hpp"

namespace cryptosent {

void SynthConfig::validate() const {
    if (n_days < 1) throw ConfigError("n_days must be >= 1");
    if (posts_per_day < 1) throw DataError("empty corpus: posts_per_day must be >= 1");
    if (vocab_pos < 1 || vocab_neg < 1 || vocab_neu < 1) throw ConfigError("vocabulary sizes must be >= 1");
    if (!(label_noise >= 0.0 && label_noise < 1.0)) throw ConfigError("label_noise must lie in [0, 1)");
    if (!(price_noise >= 0.0)) throw ConfigError("price_noise must be non-negative");
    if (!(sentiment_strength > 0.0)) throw ConfigError("sentiment_strength must be positive");
    if (!(mood_bias >= 0.0 && mood_bias <= 0.8)) throw ConfigError("mood_bias must lie in [0, 0.8]");
    if (seeds_per_polarity < 1) throw ConfigError("seeds_per_polarity must be >= 1");
}

namespace {

constexpr char32_t kCjkFirst = 0x4E00;
constexpr char32_t kCjkLast = 0x9FA5;
constexpr double kNeutralShare = 0.2;

std::vector<std::string> make_words(int count, std::mt19937_64& rng, std::set<char32_t>& used) {
    std::uniform_int_distribution<std::uint32_t> pick(kCjkFirst, kCjkLast);
    std::vector<std::string> words;
    for (int w = 0; w < count; ++w) {
        std::string word;
        for (int c = 0; c < 2; ++c) {
            char32_t cp;
            do cp = static_cast<char32_t>(pick(rng));
            while (!used.insert(cp).second);
            utf8::append(word, cp);
        }
        words.push_back(std::move(word));
    }
    return words;
}

const std::vector<std::string>& vocab_for(const SynthVocabulary& v, SentimentLabel c) {
    switch (c) {
        case SentimentLabel::Positive: return v.positive;
        case SentimentLabel::Negative: return v.negative;
        case SentimentLabel::Neutral: break;
    }
    return v.neutral;
}

}  // namespace

SynthCorpus synth_corpus(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);

    SynthCorpus out;
    std::set<char32_t> used;
    out.vocabulary.positive = make_words(cfg.vocab_pos, rng, used);
    out.vocabulary.negative = make_words(cfg.vocab_neg, rng, used);
    out.vocabulary.neutral = make_words(cfg.vocab_neu, rng, used);

    auto seeds_from = [&](const std::vector<std::string>& words, SentimentLabel polarity, std::size_t n) {
        for (std::size_t k = 0; k < std::min(n, words.size()); ++k) out.seeds.push_back({words[k], polarity});
    };
    const auto n_seed = static_cast<std::size_t>(cfg.seeds_per_polarity);
    seeds_from(out.vocabulary.positive, SentimentLabel::Positive, n_seed);
    seeds_from(out.vocabulary.negative, SentimentLabel::Negative, n_seed);
    seeds_from(out.vocabulary.neutral, SentimentLabel::Neutral, out.vocabulary.neutral.size());

    const double p_dominant = (1.0 - kNeutralShare + cfg.mood_bias) / 2.0;
    const double p_opposite = (1.0 - kNeutralShare - cfg.mood_bias) / 2.0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> length(3, 10);
    std::bernoulli_distribution coin(0.5);
    const std::vector<std::string> separators = {"", "，", " ", ""};
    const std::vector<std::string> endings = {"", "！", "。"};

    // Half the days lean bullish, half bearish, in shuffled order.
    std::vector<bool> moods(static_cast<std::size_t>(cfg.n_days), false);
    for (std::size_t d = 0; d < moods.size(); d += 2) moods[d] = true;
    if (moods.size() % 2 == 1 && coin(rng)) moods.back() = false;
    std::shuffle(moods.begin(), moods.end(), rng);

    std::vector<Post> posts;
    for (int day = 0; day < cfg.n_days; ++day) {
        const bool bullish = moods[static_cast<std::size_t>(day)];
        const SentimentLabel dominant = bullish ? SentimentLabel::Positive : SentimentLabel::Negative;
        const SentimentLabel opposite = bullish ? SentimentLabel::Negative : SentimentLabel::Positive;
        for (int k = 0; k < cfg.posts_per_day; ++k) {
            const double u = unit(rng);
            const SentimentLabel cls = u < p_dominant                ? dominant
                                       : u < p_dominant + p_opposite ? opposite
                                                                     : SentimentLabel::Neutral;
            const int n = length(rng);
            const int off_class = std::uniform_int_distribution<int>(0, (n - 1) / 2)(rng);

            std::vector<std::string> tokens;
            const auto& own = vocab_for(out.vocabulary, cls);
            for (int t = 0; t < n - off_class; ++t)
                tokens.push_back(own[std::uniform_int_distribution<std::size_t>(0, own.size() - 1)(rng)]);
            for (int t = 0; t < off_class; ++t) {
                const auto& other = cls == SentimentLabel::Neutral
                                        ? (coin(rng) ? out.vocabulary.positive : out.vocabulary.negative)
                                        : out.vocabulary.neutral;
                tokens.push_back(other[std::uniform_int_distribution<std::size_t>(0, other.size() - 1)(rng)]);
            }
            std::shuffle(tokens.begin(), tokens.end(), rng);

            std::string text;
            for (std::size_t t = 0; t < tokens.size(); ++t) {
                if (t) text += separators[std::uniform_int_distribution<std::size_t>(0, separators.size() - 1)(rng)];
                text += tokens[t];
            }
            text += endings[std::uniform_int_distribution<std::size_t>(0, endings.size() - 1)(rng)];

            SentimentLabel label = cls;
            if (unit(rng) < cfg.label_noise) {
                std::vector<SentimentLabel> others;
                for (SentimentLabel l : kAllLabels)
                    if (l != cls) others.push_back(l);
                label = others[coin(rng) ? 1 : 0];
            }

            Post post;
            post.id = "d" + std::to_string(day) + "-p" + std::to_string(k);
            post.day = day;
            post.text = std::move(text);
            post.label = label;
            post.rank = label == SentimentLabel::Positive ? 2 : label == SentimentLabel::Negative ? -2 : 0;
            posts.push_back(std::move(post));
        }
    }
    out.corpus = Corpus(std::move(posts));
    return out;
}

PriceSeries synth_market(const Corpus& corpus, const SynthConfig& cfg) {
    cfg.validate();
    const auto range = corpus.day_range();
    if (!range) throw DataError("synthetic market needs a non-empty corpus");

    std::map<int, std::pair<long, long>> balance;  // day -> (pos - neg, posts)
    for (const Post& p : corpus) {
        if (!p.label) throw DataError("synthetic market needs a labeled corpus (post " + p.id + ")");
        auto& [net, n] = balance[p.day];
        net += *p.label == SentimentLabel::Positive ? 1 : *p.label == SentimentLabel::Negative ? -1 : 0;
        ++n;
    }

    std::mt19937_64 rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<PricePoint> points;
    double close = 100.0;
    points.push_back({range->first, close});
    for (int day = range->first; day <= range->second; ++day) {
        double r = 0.0;
        if (const auto it = balance.find(day); it != balance.end())
            r = cfg.sentiment_strength * static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
        if (cfg.price_noise > 0.0) r += cfg.price_noise * gauss(rng);
        close *= std::exp(r);
        points.push_back({day + 1, close});
    }
    return PriceSeries(std::move(points));
}

}  // namespace cryptosent
