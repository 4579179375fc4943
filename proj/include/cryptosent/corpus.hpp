#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cryptosent {

enum class SentimentLabel { Negative = -1, Neutral = 0, Positive = 1 };

inline constexpr SentimentLabel kAllLabels[] = {
    SentimentLabel::Negative, SentimentLabel::Neutral, SentimentLabel::Positive};

inline int label_code(SentimentLabel label) { return static_cast<int>(label); }
/// Throws DataError for codes outside {-1, 0, 1}.
SentimentLabel label_from_code(int code);
const char* label_name(SentimentLabel label);

inline constexpr int kMinRank = -3;
inline constexpr int kMaxRank = 3;

/// A microblog post or comment. Comments are ingested as ordinary posts.
struct Post {
    std::string id;
    int day = 0;
    std::string text;
    std::optional<SentimentLabel> label;
    std::optional<int> rank;  // manual ranking in [-3, +3]

    friend bool operator==(const Post&, const Post&) = default;
};

/// Throws DataError describing the first violated Post invariant.
void validate_post(const Post& post);

/// Posts ordered by day (stable within a day).
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Post> posts);

    const std::vector<Post>& posts() const noexcept { return posts_; }
    std::size_t size() const noexcept { return posts_.size(); }
    bool empty() const noexcept { return posts_.empty(); }

    /// (min_day, max_day); nullopt for an empty corpus.
    std::optional<std::pair<int, int>> day_range() const;
    std::vector<int> distinct_days() const;
    bool fully_labeled() const;

    auto begin() const noexcept { return posts_.begin(); }
    auto end() const noexcept { return posts_.end(); }

private:
    std::vector<Post> posts_;
};

Corpus parse_corpus(std::istream& in, bool require_labels);
Corpus load_corpus(const std::filesystem::path& path, bool require_labels);

/// Canonical tab-separated form: id, day, label, rank, text.
std::string format_post(const Post& post);
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// Train gets the earliest `train_days` distinct days, test the rest.
std::pair<Corpus, Corpus> split_by_day(const Corpus& corpus, int train_days);

std::map<SentimentLabel, std::size_t> class_histogram(const Corpus& corpus);

}  // namespace cryptosent
