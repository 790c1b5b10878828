#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace causekit {

// Minimum cosine similarity between a message vector and a cause vector for
// the message to count as potentially relevant to the cause.
inline constexpr double kDefaultRelevanceThreshold = 0.3;

// Default number of expansion words computed for a cause profile.
inline constexpr int kDefaultExpansionSize = 100;

class EmbeddingFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Word -> d-dimensional vector map loaded from a text embedding file.
/// Keys are stored case-folded and lookups fold their argument, so lookup is
/// case-insensitive. Immutable after load and safe to share across threads.
class EmbeddingTable {
public:
    // Text format: one `word v1 ... vd` entry per line, whitespace separated,
    // with an optional `count d` header line. Duplicate words keep the first
    // occurrence. Throws EmbeddingFormatError (with the offending line number)
    // on dimension mismatches, non-finite values, or an empty stream.
    static EmbeddingTable load(std::istream& in);
    static EmbeddingTable load_file(const std::string& path);

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return entries_.size(); }

    // Null when the (case-folded) word is absent.
    const std::vector<double>* find(std::string_view word) const;

    const std::unordered_map<std::string, std::vector<double>>& entries() const {
        return entries_;
    }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> entries_;
};

/// a.b / (|a||b|), clamped to [-1, 1] against rounding. Throws
/// std::invalid_argument on dimension mismatch or a zero-norm input.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Componentwise arithmetic mean. Throws std::invalid_argument on an empty
/// list or mixed dimensions.
std::vector<double> average_vector(const std::vector<std::vector<double>>& vectors);

/// A cause described by seed keywords: the cause vector is the mean of the
/// seed embeddings and expanded_keywords are the vocabulary words closest to
/// it (seeds excluded).
struct CauseProfile {
    std::string name;
    std::vector<std::string> seed_keywords;
    std::vector<double> cause_vector;
    std::vector<std::string> expanded_keywords;
};

// Resolves seeds in the table (case-folded; unresolvable seeds are skipped),
// averages them into the cause vector, and ranks the remaining vocabulary by
// cosine similarity to it. Ties break lexicographically. Throws
// std::invalid_argument when no seed resolves or expansion_size < 0.
CauseProfile build_cause_profile(std::string name,
                                 const std::vector<std::string>& seed_keywords,
                                 const EmbeddingTable& table,
                                 int expansion_size = kDefaultExpansionSize);

/// Mean embedding of the in-vocabulary tokens; nullopt when none resolves.
/// Resolved words are summed in sorted order, so the result is exactly
/// invariant under token reordering.
std::optional<std::vector<double>> message_vector(const std::vector<std::string>& tokens,
                                                  const EmbeddingTable& table);

/// UNDEFINED is represented as nullopt; a defined score is in [-1, 1].
using RelevanceScore = std::optional<double>;

/// Cosine of the message vector against the cause vector; nullopt when the
/// message vector is undefined (no token resolves).
RelevanceScore relevance_score(const std::vector<std::string>& tokens,
                               const CauseProfile& profile,
                               const EmbeddingTable& table);

/// The n distinct in-vocabulary tokens with highest cosine similarity to the
/// cause vector, tie-broken by first occurrence. Fewer than n when the
/// message is short; empty when nothing resolves.
std::vector<std::string> select_top_relevant_words(const std::vector<std::string>& tokens,
                                                   const CauseProfile& profile,
                                                   const EmbeddingTable& table,
                                                   int n);

}  // namespace causekit
