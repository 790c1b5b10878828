#include "causekit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "causekit/common.hpp"

namespace causekit {

namespace {

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        return pos == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

EmbeddingTable EmbeddingTable::load(std::istream& in) {
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_entry = true;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::vector<std::string> fields;
        std::string tok;
        while (ss >> tok) fields.push_back(tok);
        if (fields.empty()) continue;

        // Optional `count d` header: exactly two numeric fields on the first
        // non-blank line.
        if (first_entry && fields.size() == 2) {
            double a, b;
            if (parse_double(fields[0], a) && parse_double(fields[1], b)) {
                first_entry = false;
                continue;
            }
        }
        first_entry = false;

        if (fields.size() < 2) {
            throw EmbeddingFormatError("embedding entry with no values at line " +
                                       std::to_string(line_no));
        }
        std::vector<double> vec;
        vec.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v;
            if (!parse_double(fields[i], v)) {
                throw EmbeddingFormatError("unparsable value '" + fields[i] +
                                           "' at line " + std::to_string(line_no));
            }
            if (!std::isfinite(v)) {
                throw EmbeddingFormatError("non-finite value at line " +
                                           std::to_string(line_no));
            }
            vec.push_back(v);
        }
        if (table.dim_ == 0) {
            table.dim_ = vec.size();
        } else if (vec.size() != table.dim_) {
            throw EmbeddingFormatError("dimension mismatch at line " +
                                       std::to_string(line_no) + " (expected " +
                                       std::to_string(table.dim_) + ", got " +
                                       std::to_string(vec.size()) + ")");
        }
        table.entries_.emplace(fold_ascii(fields[0]), std::move(vec));
    }

    if (table.entries_.empty()) {
        throw EmbeddingFormatError("embedding stream contains no entries");
    }
    return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EmbeddingFormatError("cannot open embedding file: " + path);
    return load(in);
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
    auto it = entries_.find(fold_ascii(word));
    return it == entries_.end() ? nullptr : &it->second;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch");
    }
    if (a.empty()) throw std::invalid_argument("cosine_similarity: empty vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument("cosine_similarity: zero-norm input");
    }
    // Single sqrt of the product keeps cos(v, v) exactly 1.0.
    double c = dot / std::sqrt(na * nb);
    return std::clamp(c, -1.0, 1.0);
}

std::vector<double> average_vector(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("average_vector: empty list");
    const std::size_t d = vectors.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& v : vectors) {
        if (v.size() != d) throw std::invalid_argument("average_vector: mixed dimensions");
        for (std::size_t i = 0; i < d; ++i) mean[i] += v[i];
    }
    for (double& x : mean) x /= static_cast<double>(vectors.size());
    return mean;
}

namespace {

// Mean of the resolvable words, accumulated in sorted word order so token
// order never changes the result bits. Multiplicity is preserved.
std::optional<std::vector<double>> sorted_mean(const std::vector<std::string>& words,
                                               const EmbeddingTable& table) {
    std::vector<std::string> resolved;
    resolved.reserve(words.size());
    for (const auto& w : words) {
        std::string folded = fold_ascii(w);
        if (table.find(folded) != nullptr) resolved.push_back(std::move(folded));
    }
    if (resolved.empty()) return std::nullopt;
    std::sort(resolved.begin(), resolved.end());
    std::vector<std::vector<double>> vecs;
    vecs.reserve(resolved.size());
    for (const auto& w : resolved) vecs.push_back(*table.find(w));
    return average_vector(vecs);
}

}  // namespace

CauseProfile build_cause_profile(std::string name,
                                 const std::vector<std::string>& seed_keywords,
                                 const EmbeddingTable& table,
                                 int expansion_size) {
    if (expansion_size < 0) {
        throw std::invalid_argument("build_cause_profile: expansion_size < 0");
    }
    auto mean = sorted_mean(seed_keywords, table);
    if (!mean) {
        throw std::invalid_argument("build_cause_profile: no seed keyword of cause '" +
                                    name + "' resolves in the embedding table");
    }

    CauseProfile profile;
    profile.name = std::move(name);
    profile.seed_keywords.reserve(seed_keywords.size());
    for (const auto& s : seed_keywords) profile.seed_keywords.push_back(fold_ascii(s));
    profile.cause_vector = std::move(*mean);

    if (expansion_size > 0) {
        std::set<std::string> seeds(profile.seed_keywords.begin(),
                                    profile.seed_keywords.end());
        std::vector<std::pair<double, std::string>> scored;
        scored.reserve(table.size());
        for (const auto& [word, vec] : table.entries()) {
            if (seeds.count(word)) continue;
            scored.emplace_back(cosine_similarity(vec, profile.cause_vector), word);
        }
        // Highest cosine first; ties by word order.
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        const std::size_t take =
            std::min<std::size_t>(scored.size(), static_cast<std::size_t>(expansion_size));
        profile.expanded_keywords.reserve(take);
        for (std::size_t i = 0; i < take; ++i) {
            profile.expanded_keywords.push_back(scored[i].second);
        }
    }
    return profile;
}

std::optional<std::vector<double>> message_vector(const std::vector<std::string>& tokens,
                                                  const EmbeddingTable& table) {
    return sorted_mean(tokens, table);
}

RelevanceScore relevance_score(const std::vector<std::string>& tokens,
                               const CauseProfile& profile,
                               const EmbeddingTable& table) {
    auto mv = message_vector(tokens, table);
    if (!mv) return std::nullopt;
    return cosine_similarity(*mv, profile.cause_vector);
}

std::vector<std::string> select_top_relevant_words(const std::vector<std::string>& tokens,
                                                   const CauseProfile& profile,
                                                   const EmbeddingTable& table,
                                                   int n) {
    if (n < 1) throw std::invalid_argument("select_top_relevant_words: n < 1");
    std::vector<std::pair<double, std::string>> scored;  // first-occurrence order
    std::set<std::string> seen;
    for (const auto& t : tokens) {
        std::string folded = fold_ascii(t);
        const auto* vec = table.find(folded);
        if (vec == nullptr || !seen.insert(folded).second) continue;
        scored.emplace_back(cosine_similarity(*vec, profile.cause_vector), folded);
    }
    // stable_sort keeps first-occurrence order among equal scores.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::string> out;
    const std::size_t take = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(n));
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace causekit
