#include "causekit/audit.hpp"

#include <algorithm>
#include <stdexcept>

namespace causekit {

AggregateMetrics metrics_of(const EntityProfile& profile) {
    AggregateMetrics m;
    m.high_count = profile.confident_high;
    m.high_fraction = profile.total_messages > 0
                          ? static_cast<double>(profile.confident_high) /
                                static_cast<double>(profile.total_messages)
                          : 0.0;
    m.mean_high_prob = profile.mean_high_probability;
    return m;
}

EntityProfile aggregate_entity(std::span<const MessageClassification> classifications,
                               double tau) {
    if (classifications.empty()) {
        throw std::invalid_argument("aggregate_entity: no classifications");
    }
    EntityProfile p;
    p.entity_id = classifications.front().entity_id;

    double prob_sum = 0.0;
    for (const auto& c : classifications) {
        if (c.entity_id != p.entity_id) {
            throw std::invalid_argument("aggregate_entity: mixed entity ids (" +
                                        p.entity_id + " vs " + c.entity_id + ")");
        }
        ++p.total_messages;
        const bool confident = assigned_confidence(c) > tau;
        switch (c.final_label) {
            case FinalLabel::Irrelevant:
                ++p.irrelevant_count;
                break;
            case FinalLabel::NonSupport:
                ++p.non_support_count;
                if (confident) ++p.confident_non_support;
                break;
            case FinalLabel::LowCommit:
                ++p.low_count;
                if (confident) ++p.confident_low;
                break;
            case FinalLabel::HighCommit:
                ++p.high_count;
                if (confident) {
                    ++p.confident_high;
                    prob_sum += c.p_high.value();
                    p.confident_high_messages.push_back({c.message_id, c.p_high.value()});
                }
                break;
        }
    }
    if (p.confident_high > 0) {
        p.mean_high_probability = prob_sum / static_cast<double>(p.confident_high);
    }
    return p;
}

std::set<std::string> rank_top_k(std::span<const EntityProfile> profiles,
                                 RankMetric metric, std::size_t k) {
    if (k < 1) throw std::invalid_argument("rank_top_k: k must be >= 1");

    struct Keyed {
        double key;
        bool defined;
        const EntityProfile* profile;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(profiles.size());
    for (const auto& p : profiles) {
        AggregateMetrics m = metrics_of(p);
        switch (metric) {
            case RankMetric::Count:
                keyed.push_back({static_cast<double>(m.high_count), true, &p});
                break;
            case RankMetric::Fraction:
                keyed.push_back({m.high_fraction, true, &p});
                break;
            case RankMetric::MeanProb:
                keyed.push_back({m.mean_high_prob.value_or(0.0),
                                 m.mean_high_prob.has_value(), &p});
                break;
        }
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.defined != b.defined) return a.defined;  // undefined sorts last
        if (a.key != b.key) return a.key > b.key;
        return a.profile->entity_id < b.profile->entity_id;
    });

    std::set<std::string> out;
    for (std::size_t i = 0; i < keyed.size() && i < k; ++i) {
        out.insert(keyed[i].profile->entity_id);
    }
    return out;
}

std::set<std::string> intersect_top_sets(std::span<const std::set<std::string>> sets) {
    if (sets.empty()) throw std::invalid_argument("intersect_top_sets: no sets");
    std::set<std::string> out = sets.front();
    for (std::size_t i = 1; i < sets.size(); ++i) {
        std::set<std::string> next;
        std::set_intersection(out.begin(), out.end(), sets[i].begin(), sets[i].end(),
                              std::inserter(next, next.begin()));
        out = std::move(next);
    }
    return out;
}

AuditReport flag_inauthentic(std::span<const EntityProfile> profiles, std::size_t k,
                             double tau) {
    if (k < 1) throw std::invalid_argument("flag_inauthentic: k must be >= 1");
    std::string missing;
    for (const auto& p : profiles) {
        if (!p.rating) missing += missing.empty() ? p.entity_id : ", " + p.entity_id;
    }
    if (!missing.empty()) {
        throw std::invalid_argument("flag_inauthentic: entities without a rating: " + missing);
    }
    if (profiles.empty()) {
        throw std::invalid_argument("flag_inauthentic: no profiles");
    }

    AuditReport report;
    report.k = k;
    report.tau = tau;
    report.top_sets["count"] = rank_top_k(profiles, RankMetric::Count, k);
    report.top_sets["fraction"] = rank_top_k(profiles, RankMetric::Fraction, k);
    report.top_sets["mean_prob"] = rank_top_k(profiles, RankMetric::MeanProb, k);

    std::vector<std::set<std::string>> sets = {report.top_sets["count"],
                                               report.top_sets["fraction"],
                                               report.top_sets["mean_prob"]};
    report.intersection = intersect_top_sets(sets);

    double sum = 0.0;
    for (const auto& p : profiles) sum += *p.rating;
    report.rating_mean = sum / static_cast<double>(profiles.size());

    std::vector<const EntityProfile*> flagged;
    for (const auto& p : profiles) {
        if (report.intersection.count(p.entity_id) && *p.rating < report.rating_mean) {
            flagged.push_back(&p);
        }
    }
    std::sort(flagged.begin(), flagged.end(), [](const EntityProfile* a, const EntityProfile* b) {
        if (*a->rating != *b->rating) return *a->rating < *b->rating;
        return a->entity_id < b->entity_id;
    });
    for (const EntityProfile* p : flagged) {
        report.flagged.push_back(
            {p->entity_id, *p->rating, metrics_of(*p), p->confident_high_messages});
    }
    return report;
}

}  // namespace causekit
