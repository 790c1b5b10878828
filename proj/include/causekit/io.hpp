#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "causekit/audit.hpp"
#include "causekit/pipeline.hpp"
#include "causekit/stats.hpp"
#include "causekit/textproc.hpp"

namespace causekit {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LabeledExample {
    std::string message_id;
    int label = 0;  // 4-point commitment scale
};

// --- corpus ---------------------------------------------------------------
// JSONL is the primary format: one {"entity":..., "id":..., "text":...}
// object per line. CSV (entity,id,text with optional header) is accepted as
// an alternate. Both reject duplicate message ids and malformed records with
// the offending line number.

std::vector<RawMessage> ingest_messages_jsonl(std::istream& in);
std::vector<RawMessage> ingest_messages_csv(std::istream& in);
std::vector<RawMessage> ingest_messages_file(const std::string& path,
                                             const std::string& format = "jsonl");

void write_messages_jsonl(std::span<const RawMessage> messages, std::ostream& out);
void write_messages_csv(std::span<const RawMessage> messages, std::ostream& out);

// --- ratings and labels ----------------------------------------------------

/// CSV `entity,rating` (optional header). Rejects duplicate entities and
/// non-numeric ratings.
std::map<std::string, double> ingest_ratings(std::istream& in);
std::map<std::string, double> ingest_ratings_file(const std::string& path);

/// CSV `message_id,label` (optional header) validated against the corpus and
/// the 0..3 label range.
std::vector<LabeledExample> ingest_labels(std::istream& in,
                                          const std::vector<RawMessage>& corpus);
std::vector<LabeledExample> ingest_labels_file(const std::string& path,
                                               const std::vector<RawMessage>& corpus);

// --- annotation worksheet ---------------------------------------------------

/// CSV of each entity's top-n most cause-relevant messages (descending score,
/// blank label column) for manual annotation. Entities with no message at or
/// above the threshold are absent.
void emit_annotation_template(const std::vector<RawMessage>& corpus,
                              const CauseProfile& profile, const EmbeddingTable& table,
                              double threshold, int per_entity_top_n, std::ostream& out);

// --- classification records --------------------------------------------------
// One JSON object per message: message_id, entity_id, relevance, stage
// probabilities, final_label. Null stands for an undefined value.

void write_classifications_jsonl(std::span<const MessageClassification> records,
                                 std::ostream& out);
std::vector<MessageClassification> read_classifications_jsonl(std::istream& in);

// --- entity profiles ----------------------------------------------------------

void write_profiles_json(std::span<const EntityProfile> profiles, double tau,
                         std::ostream& out);
std::vector<EntityProfile> read_profiles_json(std::istream& in, double* tau_out = nullptr);

// --- audit and regression reports ---------------------------------------------

void write_audit_json(const AuditReport& report, std::ostream& out);
void write_audit_text(const AuditReport& report, std::ostream& out);
/// Evidence rows for manual re-annotation: entity_id, message_id, text,
/// stage-2 probability, blank label column.
void write_evidence_csv(const AuditReport& report,
                        const std::map<std::string, std::string>& text_by_message_id,
                        std::ostream& out);

void write_regression_csv(const RegressionResult& result, std::ostream& out);
/// One scatter file per class: entity, x (log1p count), y (rating).
void write_scatter_csv(const std::vector<EntityDesignRow>& rows, int predictor,
                       std::ostream& out);

// --- CSV primitives -------------------------------------------------------------

/// RFC-4180 style quoting: fields containing commas, quotes, or newlines are
/// wrapped and inner quotes doubled.
std::string csv_escape(std::string_view field);

/// Minimal RFC-4180 reader; quoted fields may span lines. line() reports the
/// 1-based line the current record started on.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}
    bool next_record(std::vector<std::string>& fields);
    std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

}  // namespace causekit
