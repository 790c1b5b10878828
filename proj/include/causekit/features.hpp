#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "causekit/embedding.hpp"
#include "causekit/textproc.hpp"

namespace causekit {

/// Recipe for turning an annotated message into a feature vector: which
/// n-grams enter the bag, how the vocabulary is pruned, which linguistic-cue
/// families are added, and which dense embedding blocks are appended.
struct FeatureConfig {
    int ngram_min = 1;
    int ngram_max = 1;
    int min_df = 1;       // absolute document count
    double max_df = 1.0;  // fraction of documents, in (0, 1]

    // Linguistic-cue families (sparse columns).
    bool use_negation = false;
    bool use_persons = false;
    bool use_keyword_count = false;
    bool use_context_words = false;
    bool use_self_interactions = false;
    bool use_pos_counts = false;

    // Dense embedding blocks.
    bool dense_message_vector = false;
    bool dense_keywords_vector = false;
    bool dense_context_vector = false;
    bool dense_relevance = false;

    int keywords_n = 3;      // top-n message words for the keywords vector
    int context_window = 1;  // context words collected per side of a keyword

    // Named recipes: "bow", "bow+cues", "embed", "best-combination".
    static FeatureConfig preset(std::string_view name);

    void validate() const;
    bool any_dense() const {
        return dense_message_vector || dense_keywords_vector || dense_context_vector ||
               dense_relevance;
    }
    bool needs_profile() const {
        return use_keyword_count || use_context_words || dense_keywords_vector ||
               dense_context_vector || dense_relevance;
    }

    bool operator==(const FeatureConfig&) const = default;
};

/// Feature-name -> column-index map with document frequencies. Names are
/// ordered lexicographically so a vocabulary built twice from the same corpus
/// is identical. Immutable after build.
class Vocabulary {
public:
    Vocabulary() = default;
    // Names must be unique; indices are assigned in the given (sorted) order.
    Vocabulary(std::vector<std::string> names, std::vector<std::uint32_t> doc_freq);

    std::size_t size() const { return names_.size(); }
    // -1 when absent.
    std::int64_t index_of(const std::string& name) const;
    const std::string& name_of(std::size_t index) const { return names_.at(index); }
    std::uint32_t doc_frequency(std::size_t index) const { return doc_freq_.at(index); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::uint32_t>& doc_frequencies() const { return doc_freq_; }

private:
    std::vector<std::string> names_;
    std::vector<std::uint32_t> doc_freq_;
    std::map<std::string, std::uint32_t> index_;
};

struct DenseBlock {
    std::string name;
    std::size_t offset;
    std::size_t size;  // includes the trailing presence flag
};

struct DenseLayout {
    std::vector<DenseBlock> blocks;
    std::size_t width = 0;
};

/// Block layout for the enabled dense features at embedding dimension d.
/// Every block carries a trailing presence-flag dimension so an undefined
/// vector (all-OOV message) is distinguishable from a zero vector.
DenseLayout dense_layout(const FeatureConfig& config, std::size_t dim);

/// Hybrid sparse + dense representation of one message.
struct FeatureVector {
    std::vector<std::pair<std::uint32_t, double>> sparse;  // strictly increasing indices
    std::vector<double> dense;
};

/// Sparse feature extraction shared by vocabulary building and featurization:
/// n-gram counts over WORD/HASHTAG runs plus the enabled cue families.
/// `profile` may be null when no keyword-dependent family is enabled.
std::map<std::string, double> sparse_features(const AnnotatedMessage& msg,
                                              const FeatureConfig& config,
                                              const CauseProfile* profile);

/// Collects features over the corpus and prunes by document frequency:
/// a feature is kept iff min_df <= df <= max_df * |corpus|.
Vocabulary build_vocabulary(std::span<const AnnotatedMessage> corpus,
                            const FeatureConfig& config,
                            const CauseProfile* profile = nullptr);

/// Counts the in-vocabulary features of the message and computes the enabled
/// dense blocks. Unknown features are dropped. `table` may be null when no
/// dense block is enabled.
FeatureVector featurize(const AnnotatedMessage& msg,
                        const Vocabulary& vocab,
                        const FeatureConfig& config,
                        const EmbeddingTable* table,
                        const CauseProfile* profile);

/// Column names: sparse vocabulary names followed by dense block labels,
/// bijective with the column indices used by featurize.
std::vector<std::string> feature_names(const Vocabulary& vocab,
                                       const FeatureConfig& config,
                                       std::size_t dim);

}  // namespace causekit
