#include "cryptosent/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "cryptosent/error.hpp"
#include "cryptosent/utf8.hpp"

namespace cryptosent {

SentimentLabel label_from_code(int code) {
    switch (code) {
        case -1: return SentimentLabel::Negative;
        case 0: return SentimentLabel::Neutral;
        case 1: return SentimentLabel::Positive;
        default: throw DataError("invalid sentiment label code " + std::to_string(code));
    }
}

const char* label_name(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Negative: return "Negative";
        case SentimentLabel::Neutral: return "Neutral";
        case SentimentLabel::Positive: return "Positive";
    }
    return "?";
}

void validate_post(const Post& post) {
    if (post.day < 0) throw DataError("post " + post.id + ": negative day");
    if (!utf8::is_valid(post.text)) throw DataError("post " + post.id + ": text is not valid UTF-8");
    if (utf8::trim(post.text).empty()) throw DataError("post " + post.id + ": empty text");
    if (post.text.find_first_of("\t\n") != std::string::npos)
        throw DataError("post " + post.id + ": text contains tab or newline");
    if (post.id.find_first_of("\t\n") != std::string::npos)
        throw DataError("post id contains tab or newline");
    if (post.rank && (*post.rank < kMinRank || *post.rank > kMaxRank))
        throw DataError("post " + post.id + ": rank outside [-3, 3]");
}

Corpus::Corpus(std::vector<Post> posts) : posts_(std::move(posts)) {
    for (const Post& p : posts_) validate_post(p);
    std::stable_sort(posts_.begin(), posts_.end(),
                     [](const Post& a, const Post& b) { return a.day < b.day; });
}

std::optional<std::pair<int, int>> Corpus::day_range() const {
    if (posts_.empty()) return std::nullopt;
    return std::pair{posts_.front().day, posts_.back().day};
}

std::vector<int> Corpus::distinct_days() const {
    std::vector<int> days;
    for (const Post& p : posts_)
        if (days.empty() || days.back() != p.day) days.push_back(p.day);
    return days;
}

bool Corpus::fully_labeled() const {
    return std::all_of(posts_.begin(), posts_.end(), [](const Post& p) { return p.label.has_value(); });
}

namespace {

std::optional<int> parse_int(std::string_view field) {
    int value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw DataError("corpus line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Corpus parse_corpus(std::istream& in, bool require_labels) {
    std::vector<Post> posts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!utf8::is_valid(line)) fail_line(line_no, "not valid UTF-8");
        const auto fields = split_tabs(line);
        if (fields.size() != 5)
            fail_line(line_no, "expected 5 tab-separated fields, found " + std::to_string(fields.size()));

        Post post;
        post.id = std::string(fields[0]);
        const auto day = parse_int(fields[1]);
        if (!day || *day < 0) fail_line(line_no, "invalid day '" + std::string(fields[1]) + "'");
        post.day = *day;

        if (!fields[2].empty()) {
            const auto code = parse_int(fields[2]);
            if (!code || *code < -1 || *code > 1)
                fail_line(line_no, "invalid label '" + std::string(fields[2]) + "'");
            post.label = label_from_code(*code);
        } else if (require_labels) {
            fail_line(line_no, "missing label");
        }

        if (!fields[3].empty()) {
            const auto rank = parse_int(fields[3]);
            if (!rank || *rank < kMinRank || *rank > kMaxRank)
                fail_line(line_no, "invalid rank '" + std::string(fields[3]) + "'");
            post.rank = rank;
        }

        post.text = std::string(fields[4]);
        if (utf8::trim(post.text).empty()) fail_line(line_no, "empty text");
        posts.push_back(std::move(post));
    }
    if (posts.empty()) throw DataError("empty corpus");
    return Corpus(std::move(posts));
}

Corpus load_corpus(const std::filesystem::path& path, bool require_labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file " + path.string());
    return parse_corpus(in, require_labels);
}

std::string format_post(const Post& post) {
    std::string out = post.id;
    out += '\t';
    out += std::to_string(post.day);
    out += '\t';
    if (post.label) out += std::to_string(label_code(*post.label));
    out += '\t';
    if (post.rank) out += std::to_string(*post.rank);
    out += '\t';
    out += post.text;
    return out;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    for (const Post& p : corpus) out << format_post(p) << '\n';
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file " + path.string());
    write_corpus(out, corpus);
}

std::pair<Corpus, Corpus> split_by_day(const Corpus& corpus, int train_days) {
    if (train_days < 1) throw ConfigError("train_days must be >= 1");
    const auto days = corpus.distinct_days();
    if (static_cast<int>(days.size()) < train_days + 1)
        throw DataError("corpus spans " + std::to_string(days.size()) +
                        " distinct days; need at least " + std::to_string(train_days + 1));
    const int last_train_day = days[static_cast<std::size_t>(train_days - 1)];
    std::vector<Post> train;
    std::vector<Post> test;
    for (const Post& p : corpus) (p.day <= last_train_day ? train : test).push_back(p);
    return {Corpus(std::move(train)), Corpus(std::move(test))};
}

std::map<SentimentLabel, std::size_t> class_histogram(const Corpus& corpus) {
    std::map<SentimentLabel, std::size_t> counts;
    for (SentimentLabel l : kAllLabels) counts[l] = 0;
    for (const Post& p : corpus) {
        if (!p.label) throw DataError("post " + p.id + " is unlabeled");
        ++counts[*p.label];
    }
    return counts;
}

}  // namespace cryptosent
