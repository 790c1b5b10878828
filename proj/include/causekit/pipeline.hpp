#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causekit/learn.hpp"

namespace causekit {

/// Posterior threshold above which a prediction counts as confident.
inline constexpr double kDefaultConfidenceTau = 0.7;

/// The 4-point annotation scale: 0 not about the cause, 1 about it without
/// supporting it, 2 verbal support (low commitment), 3 claimed action (high
/// commitment).
enum class CommitmentLabel : int {
    NotAboutCause = 0,
    AboutNoSupport = 1,
    LowCommitment = 2,
    HighCommitment = 3,
};

constexpr bool is_commitment_label(int value) { return value >= 0 && value <= 3; }

/// Final bucket for one message after the two-stage cascade. NonSupport
/// covers labels 0 and 1, which the classifiers never separate.
enum class FinalLabel { Irrelevant, NonSupport, LowCommit, HighCommit };

const char* to_string(FinalLabel label);
FinalLabel final_label_from_string(std::string_view s);

struct MessageClassification {
    std::string message_id;
    std::string entity_id;
    RelevanceScore relevance;          // nullopt when no token resolves
    std::optional<double> p_support;   // stage 1, present iff the gate passed
    std::optional<double> p_high;      // stage 2, present iff stage 1 said support
    FinalLabel final_label = FinalLabel::Irrelevant;
};

struct ClassifyOptions {
    double relevance_threshold = kDefaultRelevanceThreshold;
    double stage1_threshold = 0.5;
    double stage2_threshold = 0.5;
};

/// Counts how often each stage actually ran; used to assert the commitment
/// model is never consulted for irrelevant or non-support messages.
struct PipelineCounters {
    std::size_t gated_out = 0;
    std::size_t stage1_evaluations = 0;
    std::size_t stage2_evaluations = 0;
};

/// Relevance gate, then the support classifier, then (for support messages
/// only) the commitment classifier.
MessageClassification classify_message(const AnnotatedMessage& msg,
                                       const LogisticModel& support_model,
                                       const LogisticModel& commitment_model,
                                       const CauseProfile& profile,
                                       const EmbeddingTable& table,
                                       const ClassifyOptions& options = {},
                                       PipelineCounters* counters = nullptr);

struct CorpusRun {
    struct Error {
        std::size_t index;
        std::string message_id;
        std::string what;
    };
    std::vector<MessageClassification> results;  // input order, failures skipped
    std::vector<Error> errors;
    PipelineCounters counters;
};

/// Order-preserving classification of a whole corpus. Per-message failures
/// are collected rather than aborting the run.
CorpusRun classify_corpus(std::span<const AnnotatedMessage> messages,
                          const LogisticModel& support_model,
                          const LogisticModel& commitment_model,
                          const CauseProfile& profile,
                          const EmbeddingTable& table,
                          const ClassifyOptions& options = {});

/// Probability the pipeline assigned to the side it chose: P(support) or
/// 1-P(support) at stage 1, P(high) or 1-P(high) at stage 2. The gate is
/// deterministic, so irrelevant messages have confidence 1.
double assigned_confidence(const MessageClassification& c);

/// Keeps classifications whose assigned-side probability exceeds tau.
std::vector<MessageClassification> confident_subset(
    std::span<const MessageClassification> classifications, double tau);

/// Binary training data for one stage. labels4 holds the 4-point labels
/// aligned with msgs. Support keeps everything ({0,1} vs {2,3}); Commitment
/// keeps only labels 2 and 3 (2 vs 3).
struct StageData {
    std::vector<AnnotatedMessage> messages;
    std::vector<int> y;
};
StageData stage_dataset(std::span<const AnnotatedMessage> msgs,
                        std::span<const int> labels4, Stage stage);

}  // namespace causekit
