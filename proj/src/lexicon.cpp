#include "cryptosent/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "cryptosent/encoder.hpp"
#include "cryptosent/error.hpp"
#include "cryptosent/utf8.hpp"

namespace cryptosent {

void BootstrapConfig::validate() const {
    if (rank_threshold < 1 || rank_threshold > kMaxRank)
        throw ConfigError("rank_threshold must lie in [1, 3]");
    if (min_candidate_freq < 1) throw ConfigError("min_candidate_freq must be >= 1");
    if (max_ngram_len < 1) throw ConfigError("max_ngram_len must be >= 1");
    if (max_new_per_iter < 1) throw ConfigError("max_new_per_iter must be >= 1");
    if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
    if (!(purity_min > 0.5 && purity_min <= 1.0)) throw ConfigError("purity_min must lie in (0.5, 1]");
}

void Lexicon::add(LexiconEntry entry) {
    if (entry.surface.empty()) throw DataError("lexicon surface is empty");
    if (entry.surface.find_first_of("\t\n") != std::string::npos)
        throw DataError("lexicon surface contains tab or newline");
    if (!utf8::is_valid(entry.surface)) throw DataError("lexicon surface is not valid UTF-8");
    if (entry.index && *entry.index < kFirstIndex)
        throw DataError("lexicon index " + std::to_string(*entry.index) + " is reserved");
    if (by_surface_.contains(entry.surface))
        throw DataError("duplicate lexicon surface '" + entry.surface + "'");
    max_surface_cps_ = std::max(max_surface_cps_, utf8::length(entry.surface));
    by_surface_.emplace(entry.surface, entries_.size());
    entries_.push_back(std::move(entry));
}

const LexiconEntry* Lexicon::find(std::string_view surface) const {
    const auto it = by_surface_.find(surface);
    return it == by_surface_.end() ? nullptr : &entries_[it->second];
}

bool Lexicon::indexed() const {
    return !entries_.empty() &&
           std::all_of(entries_.begin(), entries_.end(), [](const LexiconEntry& e) { return e.index.has_value(); });
}

namespace {

struct SideCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
};

}  // namespace

std::vector<LexiconEntry> bootstrap_iteration(const Corpus& corpus, const Lexicon& lexicon,
                                              const BootstrapConfig& cfg) {
    cfg.validate();
    if (lexicon.empty()) throw DataError("bootstrapping requires a non-empty lexicon");

    std::unordered_map<std::string, SideCounts> counts;
    const auto max_n = static_cast<std::size_t>(cfg.max_ngram_len);
    for (const Post& post : corpus) {
        if (!post.rank || std::abs(*post.rank) < cfg.rank_threshold) continue;
        const bool positive = *post.rank > 0;
        const auto units = utf8::decode(post.text);
        // Runs of non-separator code points; n-grams never straddle punctuation or spaces.
        std::size_t run_start = 0;
        for (std::size_t k = 0; k <= units.size(); ++k) {
            const bool boundary = k == units.size() || utf8::is_separator(units[k].code_point);
            if (!boundary) continue;
            for (std::size_t s = run_start; s < k; ++s) {
                for (std::size_t n = 1; n <= max_n && s + n <= k; ++n) {
                    const std::size_t begin = units[s].offset;
                    const std::size_t end = units[s + n - 1].offset + units[s + n - 1].width;
                    SideCounts& c = counts[post.text.substr(begin, end - begin)];
                    (positive ? c.positive : c.negative)++;
                }
            }
            run_start = k + 1;
        }
    }

    std::vector<LexiconEntry> candidates;
    for (const auto& [surface, c] : counts) {
        const std::size_t total = c.positive + c.negative;
        if (total < static_cast<std::size_t>(cfg.min_candidate_freq)) continue;
        if (lexicon.contains(surface)) continue;
        const std::size_t majority = std::max(c.positive, c.negative);
        if (static_cast<double>(majority) < cfg.purity_min * static_cast<double>(total)) continue;
        candidates.push_back({surface,
                              c.positive > c.negative ? SentimentLabel::Positive : SentimentLabel::Negative,
                              total, std::nullopt});
    }
    std::sort(candidates.begin(), candidates.end(), [](const LexiconEntry& a, const LexiconEntry& b) {
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.surface < b.surface;
    });
    if (candidates.size() > static_cast<std::size_t>(cfg.max_new_per_iter))
        candidates.resize(static_cast<std::size_t>(cfg.max_new_per_iter));
    return candidates;
}

Lexicon build_lexicon(const Corpus& corpus, const std::vector<Seed>& seeds, const BootstrapConfig& cfg,
                      BootstrapTrace* trace) {
    cfg.validate();
    if (seeds.empty()) throw DataError("empty seed list");
    if (std::none_of(corpus.begin(), corpus.end(), [](const Post& p) { return p.rank.has_value(); }))
        throw DataError("corpus has no ranked posts");

    Lexicon lexicon;
    for (const Seed& seed : seeds) {
        if (const LexiconEntry* existing = lexicon.find(seed.surface)) {
            if (existing->polarity != seed.polarity)
                throw DataError("seed '" + seed.surface + "' listed with conflicting polarities");
            continue;
        }
        lexicon.add({seed.surface, seed.polarity, 0, std::nullopt});
    }

    BootstrapTrace local;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        auto fresh = bootstrap_iteration(corpus, lexicon, cfg);
        local.added_per_iteration.push_back(fresh.size());
        if (fresh.empty()) {
            local.converged = true;
            break;
        }
        for (LexiconEntry& e : fresh) lexicon.add(std::move(e));
    }
    if (trace) *trace = std::move(local);
    return assign_indices(lexicon, corpus);
}

Lexicon assign_indices(const Lexicon& lexicon, const Corpus& corpus) {
    std::unordered_map<std::string, std::size_t> freq;
    for (const Post& post : corpus)
        for (const Token& t : tokenize(post.text, lexicon))
            if (t.known) ++freq[t.surface];

    std::vector<LexiconEntry> ordered = lexicon.entries();
    for (LexiconEntry& e : ordered) {
        const auto it = freq.find(e.surface);
        e.frequency = it == freq.end() ? 0 : it->second;
    }
    std::sort(ordered.begin(), ordered.end(), [](const LexiconEntry& a, const LexiconEntry& b) {
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.surface < b.surface;
    });

    Lexicon out;
    int next = Lexicon::kFirstIndex;
    for (LexiconEntry& e : ordered) {
        e.index = next++;
        out.add(std::move(e));
    }
    return out;
}

namespace {

constexpr std::string_view kLexiconHeader = "#lexicon v1";

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string_view::npos; start = tab + 1)
        fields.push_back(line.substr(start, tab - start));
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

}  // namespace

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
    out << kLexiconHeader << '\n';
    for (const LexiconEntry& e : lexicon.entries()) {
        out << e.surface << '\t' << label_code(e.polarity) << '\t' << e.frequency << '\t';
        if (e.index) out << *e.index;
        out << '\n';
    }
}

Lexicon parse_lexicon(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kLexiconHeader)
        throw DataError("lexicon file must start with '#lexicon v1'");

    Lexicon lexicon;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = "lexicon line " + std::to_string(line_no) + ": ";
        const auto fields = split_tabs(line);
        if (fields.size() != 4) throw DataError(where + "expected 4 tab-separated fields");
        const auto polarity = parse_number<int>(fields[1]);
        if (!polarity || *polarity < -1 || *polarity > 1) throw DataError(where + "invalid polarity");
        const auto frequency = parse_number<std::size_t>(fields[2]);
        if (!frequency) throw DataError(where + "invalid frequency");
        std::optional<int> index;
        if (!fields[3].empty()) {
            index = parse_number<int>(fields[3]);
            if (!index) throw DataError(where + "invalid index");
        }
        lexicon.add({std::string(fields[0]), label_from_code(*polarity), *frequency, index});
    }

    // Indices, when present, must cover 2..N+1 exactly.
    const auto& entries = lexicon.entries();
    const auto n_indexed = std::count_if(entries.begin(), entries.end(),
                                         [](const LexiconEntry& e) { return e.index.has_value(); });
    if (n_indexed != 0) {
        if (static_cast<std::size_t>(n_indexed) != entries.size())
            throw DataError("lexicon is only partially indexed");
        std::vector<bool> seen(entries.size(), false);
        for (const LexiconEntry& e : entries) {
            const auto slot = static_cast<std::size_t>(*e.index - Lexicon::kFirstIndex);
            if (slot >= seen.size() || seen[slot])
                throw DataError("lexicon indices are not a bijection onto 2.." +
                                std::to_string(entries.size() + 1));
            seen[slot] = true;
        }
    }
    return lexicon;
}

void save_lexicon(const std::filesystem::path& path, const Lexicon& lexicon) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write lexicon file " + path.string());
    write_lexicon(out, lexicon);
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open lexicon file " + path.string());
    return parse_lexicon(in);
}

std::vector<Seed> parse_seeds(std::istream& in) {
    std::vector<Seed> seeds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_tabs(line);
        const auto polarity = fields.size() == 2 ? parse_number<int>(fields[1]) : std::nullopt;
        if (!polarity || *polarity < -1 || *polarity > 1 || fields[0].empty())
            throw DataError("seed line " + std::to_string(line_no) + ": expected 'surface<TAB>polarity'");
        seeds.push_back({std::string(fields[0]), label_from_code(*polarity)});
    }
    return seeds;
}

std::vector<Seed> load_seeds(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open seed file " + path.string());
    return parse_seeds(in);
}

void save_seeds(const std::filesystem::path& path, const std::vector<Seed>& seeds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write seed file " + path.string());
    for (const Seed& s : seeds) out << s.surface << '\t' << label_code(s.polarity) << '\n';
}

}  // namespace cryptosent
