#include "causekit/pipeline.hpp"

#include <stdexcept>

namespace causekit {

const char* to_string(FinalLabel label) {
    switch (label) {
        case FinalLabel::Irrelevant: return "irrelevant";
        case FinalLabel::NonSupport: return "non_support";
        case FinalLabel::LowCommit: return "low_commit";
        case FinalLabel::HighCommit: return "high_commit";
    }
    return "irrelevant";
}

FinalLabel final_label_from_string(std::string_view s) {
    if (s == "irrelevant") return FinalLabel::Irrelevant;
    if (s == "non_support") return FinalLabel::NonSupport;
    if (s == "low_commit") return FinalLabel::LowCommit;
    if (s == "high_commit") return FinalLabel::HighCommit;
    throw std::invalid_argument("unknown final label: " + std::string(s));
}

MessageClassification classify_message(const AnnotatedMessage& msg,
                                       const LogisticModel& support_model,
                                       const LogisticModel& commitment_model,
                                       const CauseProfile& profile,
                                       const EmbeddingTable& table,
                                       const ClassifyOptions& options,
                                       PipelineCounters* counters) {
    if (support_model.stage != Stage::Support ||
        commitment_model.stage != Stage::Commitment) {
        throw std::invalid_argument("classify_message: models passed in the wrong order");
    }

    MessageClassification out;
    out.message_id = msg.raw.message_id;
    out.entity_id = msg.raw.entity_id;
    out.relevance = relevance_score(embeddable_words(msg), profile, table);

    if (!out.relevance || *out.relevance < options.relevance_threshold) {
        out.final_label = FinalLabel::Irrelevant;
        if (counters) ++counters->gated_out;
        return out;
    }

    FeatureVector fv_support =
        featurize(msg, support_model.vocab, support_model.config, &table, &profile);
    out.p_support = predict_proba(support_model, fv_support);
    if (counters) ++counters->stage1_evaluations;

    if (*out.p_support <= options.stage1_threshold) {
        out.final_label = FinalLabel::NonSupport;
        return out;
    }

    FeatureVector fv_commit =
        featurize(msg, commitment_model.vocab, commitment_model.config, &table, &profile);
    out.p_high = predict_proba(commitment_model, fv_commit);
    if (counters) ++counters->stage2_evaluations;

    out.final_label = *out.p_high > options.stage2_threshold ? FinalLabel::HighCommit
                                                             : FinalLabel::LowCommit;
    return out;
}

CorpusRun classify_corpus(std::span<const AnnotatedMessage> messages,
                          const LogisticModel& support_model,
                          const LogisticModel& commitment_model,
                          const CauseProfile& profile,
                          const EmbeddingTable& table,
                          const ClassifyOptions& options) {
    CorpusRun run;
    run.results.reserve(messages.size());
    for (std::size_t i = 0; i < messages.size(); ++i) {
        try {
            run.results.push_back(classify_message(messages[i], support_model,
                                                   commitment_model, profile, table,
                                                   options, &run.counters));
        } catch (const std::exception& e) {
            run.errors.push_back({i, messages[i].raw.message_id, e.what()});
        }
    }
    return run;
}

double assigned_confidence(const MessageClassification& c) {
    switch (c.final_label) {
        case FinalLabel::Irrelevant: return 1.0;
        case FinalLabel::NonSupport: return 1.0 - c.p_support.value();
        case FinalLabel::LowCommit: return 1.0 - c.p_high.value();
        case FinalLabel::HighCommit: return c.p_high.value();
    }
    return 0.0;
}

std::vector<MessageClassification> confident_subset(
    std::span<const MessageClassification> classifications, double tau) {
    if (tau < 0.0 || tau > 1.0) {
        throw std::invalid_argument("confident_subset: tau must be in [0, 1]");
    }
    std::vector<MessageClassification> out;
    for (const auto& c : classifications) {
        if (assigned_confidence(c) > tau) out.push_back(c);
    }
    return out;
}

StageData stage_dataset(std::span<const AnnotatedMessage> msgs,
                        std::span<const int> labels4, Stage stage) {
    if (msgs.size() != labels4.size()) {
        throw std::invalid_argument("stage_dataset: corpus/labels misaligned");
    }
    StageData data;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
        const int label = labels4[i];
        if (!is_commitment_label(label)) {
            throw std::invalid_argument("stage_dataset: label out of range 0..3");
        }
        const auto cl = static_cast<CommitmentLabel>(label);
        if (stage == Stage::Support) {
            data.messages.push_back(msgs[i]);
            data.y.push_back(cl >= CommitmentLabel::LowCommitment ? 1 : 0);
        } else if (cl == CommitmentLabel::LowCommitment ||
                   cl == CommitmentLabel::HighCommitment) {
            data.messages.push_back(msgs[i]);
            data.y.push_back(cl == CommitmentLabel::HighCommitment ? 1 : 0);
        }
    }
    return data;
}

}  // namespace causekit
