#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "causekit/pipeline.hpp"

namespace causekit {

/// Default size of the per-metric top sets intersected by the audit.
inline constexpr std::size_t kDefaultTopK = 50;

struct EvidenceRef {
    std::string message_id;
    double probability = 0.0;  // stage-2 P(high)
};

/// Per-entity aggregate over its classified messages. Confident counts apply
/// the tau filter on the assigned-side probability; mean_high_probability
/// averages P(high) over the confident high-commitment messages and is
/// nullopt when there are none.
struct EntityProfile {
    std::string entity_id;
    std::optional<double> rating;
    long total_messages = 0;
    long irrelevant_count = 0;
    long non_support_count = 0;
    long low_count = 0;
    long high_count = 0;
    long confident_non_support = 0;
    long confident_low = 0;
    long confident_high = 0;
    std::optional<double> mean_high_probability;
    std::vector<EvidenceRef> confident_high_messages;  // input order
};

/// The three ranking measures of one entity. high_count is the confident
/// high-commitment count; high_fraction divides by all of the entity's
/// messages, relevant or not.
struct AggregateMetrics {
    long high_count = 0;
    double high_fraction = 0.0;
    std::optional<double> mean_high_prob;
};

AggregateMetrics metrics_of(const EntityProfile& profile);

/// Folds one entity's classifications into a profile. Throws when the
/// records carry mixed entity ids or the list is empty.
EntityProfile aggregate_entity(std::span<const MessageClassification> classifications,
                               double tau = kDefaultConfidenceTau);

enum class RankMetric { Count, Fraction, MeanProb };

/// The k entities ranking highest under the metric (all of them when fewer
/// than k exist). Ties break toward the lexicographically smaller entity_id;
/// entities with an undefined mean probability sort last.
std::set<std::string> rank_top_k(std::span<const EntityProfile> profiles,
                                 RankMetric metric, std::size_t k);

std::set<std::string> intersect_top_sets(std::span<const std::set<std::string>> sets);

struct FlaggedEntity {
    std::string entity_id;
    double rating = 0.0;
    AggregateMetrics metrics;
    std::vector<EvidenceRef> evidence;  // confident high-commitment messages
};

struct AuditReport {
    std::size_t k = 0;
    double tau = 0.0;
    double rating_mean = 0.0;  // over all rated profiles supplied
    std::map<std::string, std::set<std::string>> top_sets;  // count/fraction/mean_prob
    std::set<std::string> intersection;
    std::vector<FlaggedEntity> flagged;  // ascending by rating
};

/// Intersects the three top-k sets and flags the members whose rating falls
/// strictly below the mean rating of all supplied profiles. Profiles must
/// already be aggregated at the same tau recorded here. Throws when any
/// profile lacks a rating (listing the entity ids).
AuditReport flag_inauthentic(std::span<const EntityProfile> profiles, std::size_t k,
                             double tau);

}  // namespace causekit
