#include "causekit/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"

#include "causekit/common.hpp"
#include "causekit/embedding.hpp"

namespace causekit {

namespace {

using ordered_json = nlohmann::ordered_json;

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

bool blank_record(const std::vector<std::string>& fields) {
    return fields.size() == 1 && blank(fields[0]);
}

double parse_strict_double(const std::string& s, const char* what, std::size_t line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw IngestError(std::string("non-numeric ") + what + " '" + s + "' at line " +
                          std::to_string(line));
    }
}

}  // namespace

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

bool CsvReader::next_record(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;
    record_line_ = line_;
    std::string field;
    bool in_quotes = false;
    for (;;) {
        if (c == EOF) {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(field);
            return true;
        }
        const char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    field += '"';
                    in_.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field += ch;
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch == '\n') {
            ++line_;
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(field);
            return true;
        } else {
            field += ch;
        }
        c = in_.get();
    }
}

// --- corpus ---------------------------------------------------------------

namespace {

void validate_message(RawMessage& m, std::set<std::string>& seen, std::size_t line) {
    if (m.entity_id.empty() || m.message_id.empty()) {
        throw IngestError("empty entity or message id at line " + std::to_string(line));
    }
    if (!seen.insert(m.message_id).second) {
        throw IngestError("duplicate message id '" + m.message_id + "' at line " +
                          std::to_string(line));
    }
}

}  // namespace

std::vector<RawMessage> ingest_messages_jsonl(std::istream& in) {
    std::vector<RawMessage> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw IngestError("malformed JSON at line " + std::to_string(line_no) + ": " +
                              e.what());
        }
        if (!j.is_object() || !j.contains("entity") || !j.contains("id") ||
            !j.contains("text") || !j["entity"].is_string() || !j["id"].is_string() ||
            !j["text"].is_string()) {
            throw IngestError("record at line " + std::to_string(line_no) +
                              " needs string fields entity, id, text");
        }
        RawMessage m{j["entity"].get<std::string>(), j["id"].get<std::string>(),
                     j["text"].get<std::string>()};
        validate_message(m, seen, line_no);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<RawMessage> ingest_messages_csv(std::istream& in) {
    std::vector<RawMessage> out;
    std::set<std::string> seen;
    CsvReader reader(in);
    std::vector<std::string> fields;
    bool first = true;
    while (reader.next_record(fields)) {
        if (blank_record(fields)) continue;
        if (first && fields == std::vector<std::string>{"entity", "id", "text"}) {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() != 3) {
            throw IngestError("expected 3 fields (entity,id,text) at line " +
                              std::to_string(reader.line()));
        }
        RawMessage m{fields[0], fields[1], fields[2]};
        validate_message(m, seen, reader.line());
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<RawMessage> ingest_messages_file(const std::string& path,
                                             const std::string& format) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open corpus file: " + path);
    if (format == "jsonl") return ingest_messages_jsonl(in);
    if (format == "csv") return ingest_messages_csv(in);
    throw IngestError("unknown corpus format: " + format);
}

void write_messages_jsonl(std::span<const RawMessage> messages, std::ostream& out) {
    for (const auto& m : messages) {
        ordered_json j;
        j["entity"] = m.entity_id;
        j["id"] = m.message_id;
        j["text"] = m.text;
        out << j.dump() << "\n";
    }
}

void write_messages_csv(std::span<const RawMessage> messages, std::ostream& out) {
    out << "entity,id,text\n";
    for (const auto& m : messages) {
        out << csv_escape(m.entity_id) << ',' << csv_escape(m.message_id) << ','
            << csv_escape(m.text) << "\n";
    }
}

// --- ratings and labels ------------------------------------------------------

std::map<std::string, double> ingest_ratings(std::istream& in) {
    std::map<std::string, double> out;
    CsvReader reader(in);
    std::vector<std::string> fields;
    bool first = true;
    while (reader.next_record(fields)) {
        if (blank_record(fields)) continue;
        if (first && fields == std::vector<std::string>{"entity", "rating"}) {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() != 2) {
            throw IngestError("expected 2 fields (entity,rating) at line " +
                              std::to_string(reader.line()));
        }
        double rating = parse_strict_double(fields[1], "rating", reader.line());
        if (!out.emplace(fields[0], rating).second) {
            throw IngestError("duplicate entity '" + fields[0] + "' at line " +
                              std::to_string(reader.line()));
        }
    }
    return out;
}

std::map<std::string, double> ingest_ratings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open ratings file: " + path);
    return ingest_ratings(in);
}

std::vector<LabeledExample> ingest_labels(std::istream& in,
                                          const std::vector<RawMessage>& corpus) {
    std::set<std::string> known;
    for (const auto& m : corpus) known.insert(m.message_id);

    std::vector<LabeledExample> out;
    std::set<std::string> seen;
    CsvReader reader(in);
    std::vector<std::string> fields;
    bool first = true;
    while (reader.next_record(fields)) {
        if (blank_record(fields)) continue;
        if (first && fields == std::vector<std::string>{"message_id", "label"}) {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() != 2) {
            throw IngestError("expected 2 fields (message_id,label) at line " +
                              std::to_string(reader.line()));
        }
        double raw = parse_strict_double(fields[1], "label", reader.line());
        int label = static_cast<int>(raw);
        if (raw != label || !is_commitment_label(label)) {
            throw IngestError("label out of range 0..3 at line " +
                              std::to_string(reader.line()));
        }
        if (!known.count(fields[0])) {
            throw IngestError("label references unknown message id '" + fields[0] +
                              "' at line " + std::to_string(reader.line()));
        }
        if (!seen.insert(fields[0]).second) {
            throw IngestError("duplicate label for message id '" + fields[0] +
                              "' at line " + std::to_string(reader.line()));
        }
        out.push_back({fields[0], label});
    }
    return out;
}

std::vector<LabeledExample> ingest_labels_file(const std::string& path,
                                               const std::vector<RawMessage>& corpus) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open labels file: " + path);
    return ingest_labels(in, corpus);
}

// --- annotation worksheet -------------------------------------------------------

void emit_annotation_template(const std::vector<RawMessage>& corpus,
                              const CauseProfile& profile, const EmbeddingTable& table,
                              double threshold, int per_entity_top_n, std::ostream& out) {
    if (per_entity_top_n < 1) {
        throw std::invalid_argument("emit_annotation_template: per_entity_top_n < 1");
    }
    struct Row {
        const RawMessage* msg;
        double score;
    };
    std::map<std::string, std::vector<Row>> by_entity;
    for (const auto& m : corpus) {
        std::vector<std::string> words;
        for (const auto& t : tokenize(m)) {
            if (t.kind == TokenKind::Word || t.kind == TokenKind::Hashtag) {
                words.push_back(t.surface);
            }
        }
        auto score = relevance_score(words, profile, table);
        if (score && *score >= threshold) by_entity[m.entity_id].push_back({&m, *score});
    }

    out << "entity_id,message_id,relevance,text,label\n";
    for (auto& [entity, rows] : by_entity) {
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.msg->message_id < b.msg->message_id;
        });
        const std::size_t take =
            std::min<std::size_t>(rows.size(), static_cast<std::size_t>(per_entity_top_n));
        for (std::size_t i = 0; i < take; ++i) {
            out << csv_escape(entity) << ',' << csv_escape(rows[i].msg->message_id) << ','
                << format_double(rows[i].score) << ',' << csv_escape(rows[i].msg->text)
                << ",\n";
        }
    }
}

// --- classification records --------------------------------------------------------

void write_classifications_jsonl(std::span<const MessageClassification> records,
                                 std::ostream& out) {
    for (const auto& c : records) {
        ordered_json j;
        j["message_id"] = c.message_id;
        j["entity_id"] = c.entity_id;
        j["relevance"] = c.relevance ? ordered_json(*c.relevance) : ordered_json(nullptr);
        j["p_support"] = c.p_support ? ordered_json(*c.p_support) : ordered_json(nullptr);
        j["p_high"] = c.p_high ? ordered_json(*c.p_high) : ordered_json(nullptr);
        j["final_label"] = to_string(c.final_label);
        out << j.dump() << "\n";
    }
}

std::vector<MessageClassification> read_classifications_jsonl(std::istream& in) {
    std::vector<MessageClassification> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw IngestError("malformed classification record at line " +
                              std::to_string(line_no) + ": " + e.what());
        }
        MessageClassification c;
        c.message_id = j.at("message_id").get<std::string>();
        c.entity_id = j.at("entity_id").get<std::string>();
        if (!j.at("relevance").is_null()) c.relevance = j["relevance"].get<double>();
        if (!j.at("p_support").is_null()) c.p_support = j["p_support"].get<double>();
        if (!j.at("p_high").is_null()) c.p_high = j["p_high"].get<double>();
        c.final_label = final_label_from_string(j.at("final_label").get<std::string>());
        out.push_back(std::move(c));
    }
    return out;
}

// --- entity profiles -------------------------------------------------------------

void write_profiles_json(std::span<const EntityProfile> profiles, double tau,
                         std::ostream& out) {
    std::vector<const EntityProfile*> sorted;
    sorted.reserve(profiles.size());
    for (const auto& p : profiles) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const EntityProfile* a, const EntityProfile* b) {
        return a->entity_id < b->entity_id;
    });

    ordered_json doc;
    doc["kind"] = "causekit-entity-profiles";
    doc["tau"] = tau;
    doc["entities"] = ordered_json::array();
    for (const EntityProfile* p : sorted) {
        ordered_json e;
        e["entity_id"] = p->entity_id;
        e["rating"] = p->rating ? ordered_json(*p->rating) : ordered_json(nullptr);
        e["total_messages"] = p->total_messages;
        e["counts"] = {{"irrelevant", p->irrelevant_count},
                       {"non_support", p->non_support_count},
                       {"low_commit", p->low_count},
                       {"high_commit", p->high_count}};
        e["confident_counts"] = {{"non_support", p->confident_non_support},
                                 {"low_commit", p->confident_low},
                                 {"high_commit", p->confident_high}};
        e["mean_high_probability"] = p->mean_high_probability
                                         ? ordered_json(*p->mean_high_probability)
                                         : ordered_json(nullptr);
        ordered_json evidence = ordered_json::array();
        for (const auto& ev : p->confident_high_messages) {
            evidence.push_back({{"message_id", ev.message_id},
                                {"probability", ev.probability}});
        }
        e["confident_high_messages"] = std::move(evidence);
        doc["entities"].push_back(std::move(e));
    }
    out << doc.dump(2) << "\n";
}

std::vector<EntityProfile> read_profiles_json(std::istream& in, double* tau_out) {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.value("kind", "") != "causekit-entity-profiles") {
        throw IngestError("not a causekit entity-profiles document");
    }
    if (tau_out) *tau_out = doc.at("tau").get<double>();
    std::vector<EntityProfile> out;
    for (const auto& e : doc.at("entities")) {
        EntityProfile p;
        p.entity_id = e.at("entity_id").get<std::string>();
        if (!e.at("rating").is_null()) p.rating = e["rating"].get<double>();
        p.total_messages = e.at("total_messages").get<long>();
        p.irrelevant_count = e.at("counts").at("irrelevant").get<long>();
        p.non_support_count = e.at("counts").at("non_support").get<long>();
        p.low_count = e.at("counts").at("low_commit").get<long>();
        p.high_count = e.at("counts").at("high_commit").get<long>();
        p.confident_non_support = e.at("confident_counts").at("non_support").get<long>();
        p.confident_low = e.at("confident_counts").at("low_commit").get<long>();
        p.confident_high = e.at("confident_counts").at("high_commit").get<long>();
        if (!e.at("mean_high_probability").is_null()) {
            p.mean_high_probability = e["mean_high_probability"].get<double>();
        }
        for (const auto& ev : e.at("confident_high_messages")) {
            p.confident_high_messages.push_back({ev.at("message_id").get<std::string>(),
                                                 ev.at("probability").get<double>()});
        }
        out.push_back(std::move(p));
    }
    return out;
}

// --- audit and regression reports ---------------------------------------------------

void write_audit_json(const AuditReport& report, std::ostream& out) {
    ordered_json j;
    j["kind"] = "causekit-audit-report";
    j["k"] = report.k;
    j["tau"] = report.tau;
    j["rating_mean"] = report.rating_mean;
    for (const auto& [name, ids] : report.top_sets) {
        j["top_sets"][name] = std::vector<std::string>(ids.begin(), ids.end());
    }
    j["intersection"] =
        std::vector<std::string>(report.intersection.begin(), report.intersection.end());
    j["flagged"] = ordered_json::array();
    for (const auto& f : report.flagged) {
        ordered_json e;
        e["entity_id"] = f.entity_id;
        e["rating"] = f.rating;
        e["high_count"] = f.metrics.high_count;
        e["high_fraction"] = f.metrics.high_fraction;
        e["mean_high_probability"] = f.metrics.mean_high_prob
                                         ? ordered_json(*f.metrics.mean_high_prob)
                                         : ordered_json(nullptr);
        ordered_json evidence = ordered_json::array();
        for (const auto& ev : f.evidence) {
            evidence.push_back({{"message_id", ev.message_id},
                                {"probability", ev.probability}});
        }
        e["evidence"] = std::move(evidence);
        j["flagged"].push_back(std::move(e));
    }
    out << j.dump(2) << "\n";
}

void write_audit_text(const AuditReport& report, std::ostream& out) {
    out << "audit report (k=" << report.k << ", tau=" << format_double(report.tau)
        << ", rating mean over all entities=" << format_double(report.rating_mean) << ")\n";
    out << "intersection of top-" << report.k << " sets: " << report.intersection.size()
        << " entities\n";
    for (const auto& id : report.intersection) out << "  " << id << "\n";
    out << "flagged as potentially inauthentic (rating below mean, ascending):\n";
    if (report.flagged.empty()) out << "  (none)\n";
    std::size_t rank = 0;
    for (const auto& f : report.flagged) {
        out << "  " << ++rank << ". " << f.entity_id << "  rating "
            << format_double(f.rating) << "  confident high-commitment "
            << f.metrics.high_count << " (fraction "
            << format_double(f.metrics.high_fraction) << ", mean probability "
            << (f.metrics.mean_high_prob ? format_double(*f.metrics.mean_high_prob)
                                         : std::string("n/a"))
            << ")\n";
    }
}

void write_evidence_csv(const AuditReport& report,
                        const std::map<std::string, std::string>& text_by_message_id,
                        std::ostream& out) {
    out << "entity_id,message_id,text,probability,label\n";
    for (const auto& f : report.flagged) {
        for (const auto& ev : f.evidence) {
            auto it = text_by_message_id.find(ev.message_id);
            out << csv_escape(f.entity_id) << ',' << csv_escape(ev.message_id) << ','
                << csv_escape(it != text_by_message_id.end() ? it->second : "") << ','
                << format_double(ev.probability) << ",\n";
        }
    }
}

void write_regression_csv(const RegressionResult& result, std::ostream& out) {
    out << "term,coefficient,std_error,t_statistic,p_value\n";
    for (std::size_t i = 0; i < result.names.size(); ++i) {
        out << csv_escape(result.names[i]) << ',' << format_double(result.coefficients[i])
            << ',' << format_double(result.standard_errors[i]) << ','
            << format_double(result.t_statistics[i]) << ','
            << format_double(result.p_values[i]) << "\n";
    }
}

void write_scatter_csv(const std::vector<EntityDesignRow>& rows, int predictor,
                       std::ostream& out) {
    if (predictor < 1 || predictor > 3) {
        throw std::invalid_argument("write_scatter_csv: predictor must be 1..3");
    }
    out << "entity,log1p_count,rating\n";
    for (const auto& r : rows) {
        const double x = predictor == 1 ? r.x1 : predictor == 2 ? r.x2 : r.x3;
        out << csv_escape(r.entity_id) << ',' << format_double(x) << ','
            << format_double(r.y) << "\n";
    }
}

}  // namespace causekit
