#include "causekit/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace causekit {

void FeatureConfig::validate() const {
    if (ngram_min < 1 || ngram_min > ngram_max || ngram_max > 3) {
        throw std::invalid_argument("FeatureConfig: need 1 <= ngram_min <= ngram_max <= 3");
    }
    if (min_df < 1) throw std::invalid_argument("FeatureConfig: min_df must be >= 1");
    if (!(max_df > 0.0 && max_df <= 1.0)) {
        throw std::invalid_argument("FeatureConfig: max_df must be in (0, 1]");
    }
    if (keywords_n < 1) throw std::invalid_argument("FeatureConfig: keywords_n must be >= 1");
    if (context_window < 1) {
        throw std::invalid_argument("FeatureConfig: context_window must be >= 1");
    }
}

FeatureConfig FeatureConfig::preset(std::string_view name) {
    FeatureConfig c;
    if (name == "bow") {
        c.ngram_max = 2;
        return c;
    }
    if (name == "bow+cues") {
        c.ngram_max = 2;
        c.use_negation = c.use_persons = c.use_keyword_count = c.use_context_words =
            c.use_self_interactions = c.use_pos_counts = true;
        return c;
    }
    if (name == "embed") {
        // Dense blocks only; n-grams are always collected, so an
        // unsatisfiable min_df empties the sparse vocabulary.
        c.min_df = 1000000;
        c.dense_message_vector = c.dense_keywords_vector = c.dense_context_vector =
            c.dense_relevance = true;
        return c;
    }
    if (name == "best-combination") {
        c.ngram_max = 2;
        c.use_negation = c.use_persons = c.use_keyword_count = c.use_context_words =
            c.use_self_interactions = c.use_pos_counts = true;
        c.dense_message_vector = c.dense_keywords_vector = c.dense_context_vector =
            c.dense_relevance = true;
        return c;
    }
    throw std::invalid_argument("unknown feature preset: " + std::string(name));
}

Vocabulary::Vocabulary(std::vector<std::string> names, std::vector<std::uint32_t> doc_freq)
    : names_(std::move(names)), doc_freq_(std::move(doc_freq)) {
    if (names_.size() != doc_freq_.size()) {
        throw std::invalid_argument("Vocabulary: names/doc_freq size mismatch");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], static_cast<std::uint32_t>(i)).second) {
            throw std::invalid_argument("Vocabulary: duplicate feature name " + names_[i]);
        }
    }
}

std::int64_t Vocabulary::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

DenseLayout dense_layout(const FeatureConfig& config, std::size_t dim) {
    DenseLayout layout;
    auto add = [&](const std::string& name, std::size_t size) {
        layout.blocks.push_back({name, layout.width, size});
        layout.width += size;
    };
    if (config.dense_message_vector) add("mvec", dim + 1);
    if (config.dense_keywords_vector) add("kvec", dim + 1);
    if (config.dense_context_vector) add("cvec", dim + 1);
    if (config.dense_relevance) add("relevance", 2);
    return layout;
}

namespace {

std::set<std::string> expanded_keyword_set(const CauseProfile& profile) {
    return {profile.expanded_keywords.begin(), profile.expanded_keywords.end()};
}

// Maximal runs of WORD/HASHTAG tokens; any other kind breaks a run, so
// n-grams never cross punctuation, mentions, or URLs.
std::vector<std::vector<const Token*>> ngram_runs(const AnnotatedMessage& msg) {
    std::vector<std::vector<const Token*>> runs;
    std::vector<const Token*> run;
    for (const auto& t : msg.tokens) {
        if (t.kind == TokenKind::Word || t.kind == TokenKind::Hashtag) {
            run.push_back(&t);
        } else if (!run.empty()) {
            runs.push_back(std::move(run));
            run.clear();
        }
    }
    if (!run.empty()) runs.push_back(std::move(run));
    return runs;
}

}  // namespace

std::map<std::string, double> sparse_features(const AnnotatedMessage& msg,
                                              const FeatureConfig& config,
                                              const CauseProfile* profile) {
    if ((config.use_keyword_count || config.use_context_words) && profile == nullptr) {
        throw std::invalid_argument("sparse_features: config needs a cause profile");
    }
    std::map<std::string, double> feats;

    for (const auto& run : ngram_runs(msg)) {
        for (int n = config.ngram_min; n <= config.ngram_max; ++n) {
            if (run.size() < static_cast<std::size_t>(n)) continue;
            for (std::size_t i = 0; i + n <= run.size(); ++i) {
                std::string name = run[i]->surface;
                for (int j = 1; j < n; ++j) {
                    name += ' ';
                    name += run[i + j]->surface;
                }
                feats[name] += 1.0;
            }
        }
    }

    if (config.use_negation) {
        for (const auto& t : msg.tokens) {
            if (t.kind == TokenKind::Word && t.negated) feats["_NEG_" + t.surface] += 1.0;
        }
    }
    if (config.use_persons) {
        for (const auto& [cls, count] : msg.person_markers) {
            const char* name = cls == PersonClass::First    ? "first_person"
                               : cls == PersonClass::Second ? "second_person"
                                                            : "third_person";
            feats[name] += count;
        }
    }
    if (config.use_keyword_count) {
        auto kws = expanded_keyword_set(*profile);
        int count = 0;
        for (const auto& t : msg.tokens) {
            if (t.kind == TokenKind::Word && kws.count(t.surface)) ++count;
        }
        if (count > 0) feats["keyword_count"] = count;
    }
    if (config.use_context_words) {
        auto kws = expanded_keyword_set(*profile);
        for (const auto& w : keyword_contexts(msg.tokens, kws, config.context_window)) {
            feats["ctx_" + w] += 1.0;
        }
    }
    if (config.use_self_interactions) {
        if (msg.mentions_self) feats["self_mention"] = 1.0;
        if (msg.is_retweet) feats["is_retweet"] = 1.0;
        if (msg.retweet_of_self) feats["retweet_of_self"] = 1.0;
    }
    if (config.use_pos_counts) {
        for (const auto& t : msg.tokens) {
            if (t.kind != TokenKind::Word) continue;
            const char* name = nullptr;
            switch (t.pos) {
                case PosTag::Pron: name = "pos_pron"; break;
                case PosTag::Verb: name = "pos_verb"; break;
                case PosTag::Noun: name = "pos_noun"; break;
                case PosTag::Adj: name = "pos_adj"; break;
                case PosTag::Adv: name = "pos_adv"; break;
                case PosTag::Other: name = "pos_other"; break;
            }
            feats[name] += 1.0;
        }
    }
    return feats;
}

Vocabulary build_vocabulary(std::span<const AnnotatedMessage> corpus,
                            const FeatureConfig& config,
                            const CauseProfile* profile) {
    config.validate();
    if (corpus.empty()) throw std::invalid_argument("build_vocabulary: empty corpus");

    std::map<std::string, std::uint32_t> df;
    for (const auto& msg : corpus) {
        for (const auto& [name, value] : sparse_features(msg, config, profile)) {
            if (value != 0.0) ++df[name];
        }
    }

    const double max_count = config.max_df * static_cast<double>(corpus.size());
    std::vector<std::string> names;
    std::vector<std::uint32_t> freqs;
    for (const auto& [name, count] : df) {  // std::map iterates in name order
        if (count < static_cast<std::uint32_t>(config.min_df)) continue;
        if (static_cast<double>(count) > max_count) continue;
        names.push_back(name);
        freqs.push_back(count);
    }
    return Vocabulary(std::move(names), std::move(freqs));
}

namespace {

void append_block(std::vector<double>& dense,
                  const std::optional<std::vector<double>>& value,
                  std::size_t dim) {
    if (value) {
        dense.insert(dense.end(), value->begin(), value->end());
        dense.push_back(1.0);
    } else {
        dense.insert(dense.end(), dim, 0.0);
        dense.push_back(0.0);
    }
}

}  // namespace

FeatureVector featurize(const AnnotatedMessage& msg,
                        const Vocabulary& vocab,
                        const FeatureConfig& config,
                        const EmbeddingTable* table,
                        const CauseProfile* profile) {
    config.validate();
    if (config.any_dense() && table == nullptr) {
        throw std::invalid_argument("featurize: dense blocks enabled but no embedding table");
    }
    if (config.needs_profile() && profile == nullptr) {
        throw std::invalid_argument("featurize: config needs a cause profile");
    }

    FeatureVector fv;
    for (const auto& [name, value] : sparse_features(msg, config, profile)) {
        std::int64_t idx = vocab.index_of(name);
        if (idx >= 0 && value != 0.0) {
            fv.sparse.emplace_back(static_cast<std::uint32_t>(idx), value);
        }
    }
    std::sort(fv.sparse.begin(), fv.sparse.end());

    if (config.any_dense()) {
        const std::size_t dim = table->dimension();
        fv.dense.reserve(dense_layout(config, dim).width);
        const auto words = embeddable_words(msg);

        if (config.dense_message_vector) {
            append_block(fv.dense, message_vector(words, *table), dim);
        }
        if (config.dense_keywords_vector) {
            auto top = select_top_relevant_words(words, *profile, *table, config.keywords_n);
            std::optional<std::vector<double>> kvec;
            if (!top.empty()) kvec = message_vector(top, *table);
            append_block(fv.dense, kvec, dim);
        }
        if (config.dense_context_vector) {
            auto kws = expanded_keyword_set(*profile);
            auto ctx = keyword_contexts(msg.tokens, kws, config.context_window);
            std::optional<std::vector<double>> cvec;
            if (!ctx.empty()) cvec = message_vector(ctx, *table);
            append_block(fv.dense, cvec, dim);
        }
        if (config.dense_relevance) {
            auto score = relevance_score(words, *profile, *table);
            if (score) {
                fv.dense.push_back(*score);
                fv.dense.push_back(1.0);
            } else {
                fv.dense.push_back(0.0);
                fv.dense.push_back(0.0);
            }
        }
    }
    return fv;
}

std::vector<std::string> feature_names(const Vocabulary& vocab,
                                       const FeatureConfig& config,
                                       std::size_t dim) {
    std::vector<std::string> names = vocab.names();
    for (const auto& block : dense_layout(config, dim).blocks) {
        if (block.name == "relevance") {
            names.push_back("relevance");
            names.push_back("relevance_present");
            continue;
        }
        for (std::size_t i = 0; i + 1 < block.size; ++i) {
            names.push_back(block.name + "_" + std::to_string(i));
        }
        names.push_back(block.name + "_present");
    }
    return names;
}

}  // namespace causekit
