#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causekit/features.hpp"

namespace causekit {

/// Everything a run needs, read from a JSON config document and overridable
/// by command-line flags. Paths are resolved relative to the working
/// directory.
struct RunConfig {
    // cause profile
    std::string cause_name = "cause";
    std::vector<std::string> seed_keywords;
    int expansion_size = kDefaultExpansionSize;

    // inputs
    std::string embeddings_path;
    std::string messages_path;
    std::string labels_path;
    std::string ratings_path;
    std::string positive_lexicon_path;
    std::string negative_lexicon_path;
    std::string corpus_format = "jsonl";

    // knobs
    double threshold = kDefaultRelevanceThreshold;
    double tau = 0.7;
    int top_k = 50;
    int folds = 10;
    std::optional<std::uint64_t> seed;

    // model settings: a single feature config / lambda, or grid axes
    std::optional<FeatureConfig> features;
    std::optional<double> lambda;
    std::vector<std::string> feature_presets;
    std::vector<int> grid_min_df;
    std::vector<double> grid_max_df;
    std::vector<int> grid_ngram_max;
    std::vector<double> lambda_grid;

    static RunConfig from_json_file(const std::string& path);
};

/// Dispatches one subcommand (filter, template, train, cv, classify,
/// aggregate, correlate, audit, sentiment-report). Returns the process exit
/// status: 0 success, 1 runtime failure, 2 usage/config error.
int run_subcommand(const std::vector<std::string>& args);

}  // namespace causekit
