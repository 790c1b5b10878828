#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "causekit/features.hpp"

namespace causekit {

/// Confusion counts and the derived ratios for one binary evaluation.
/// precision = tp/(tp+fp) and recall = tp/(tp+fn), both 0 when undefined;
/// f1 = 2PR/(P+R), 0 when P+R = 0.
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
};

Metrics prf1(std::span<const int> y_true, std::span<const int> y_pred, int positive = 1);

/// Which binary sub-task a model solves over the 4-point commitment scale:
/// the support stage separates labels {0,1} from {2,3}; the commitment stage
/// separates label 2 from label 3.
enum class Stage { Support, Commitment };

const char* to_string(Stage s);
Stage stage_from_string(std::string_view s);

struct TrainingMeta {
    int iterations = 0;
    double final_grad_norm = 0.0;
    std::uint64_t seed = 0;
};

struct LogisticModel {
    Stage stage = Stage::Support;
    FeatureConfig config;
    Vocabulary vocab;
    std::size_t dense_width = 0;
    std::vector<double> weights;  // |vocab| sparse columns then dense columns
    double bias = 0.0;
    double lambda = 0.0;
    TrainingMeta meta;
    std::uint64_t corpus_digest = 0;
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

/// Mean cross-entropy plus (lambda/2)|w|^2 (bias unregularized) and its exact
/// analytic gradient. Uses log-sum-exp-stable forms throughout; throws on
/// non-finite inputs or an empty batch.
LossGrad loss_and_gradient(std::span<const double> weights, double bias,
                           std::span<const FeatureVector> X, std::span<const int> y,
                           double lambda);

struct OptimizerBudget {
    int max_iterations = 1000;
    double grad_tolerance = 1e-6;  // stop when the gradient inf-norm drops below
};

struct FitResult {
    std::vector<double> weights;
    double bias = 0.0;
    TrainingMeta meta;
};

/// Deterministic full-batch gradient descent with backtracking (Armijo) line
/// search from the zero vector. `n_sparse_columns` fixes the weight layout:
/// sparse indices address [0, n_sparse_columns) and the dense block the tail.
/// Throws on single-class labels or non-finite features.
FitResult fit_logistic(std::span<const FeatureVector> X, std::span<const int> y,
                       double lambda, std::size_t n_sparse_columns,
                       const OptimizerBudget& budget = {});

/// sigmoid(w.x + b), clamped away from exact 0/1 so probabilities are
/// strictly inside (0, 1). Throws on a layout mismatch with the weights.
double predict_proba(std::span<const double> weights, double bias, const FeatureVector& fv);
double predict_proba(const LogisticModel& model, const FeatureVector& fv);

/// Builds the vocabulary over the whole corpus, featurizes, and fits.
/// `labels` are binary (1 = the stage's positive class).
LogisticModel train_logistic(std::span<const AnnotatedMessage> corpus,
                             std::span<const int> labels, const FeatureConfig& config,
                             double lambda, Stage stage, const EmbeddingTable* table,
                             const CauseProfile* profile,
                             const OptimizerBudget& budget = {}, std::uint64_t seed = 0);

struct CVReport {
    int k = 0;
    std::vector<Metrics> folds;
    double mean_f1 = 0.0;
    std::uint64_t seed = 0;
    FeatureConfig config;
    double lambda = 0.0;
};

/// Stratified k-fold cross-validation with a seeded shuffle. The vocabulary
/// is rebuilt inside each training fold only, so held-out tokens never leak
/// into training features. Throws when a class has fewer than k members.
CVReport kfold_cv(std::span<const AnnotatedMessage> corpus, std::span<const int> labels,
                  const FeatureConfig& config, double lambda, int k, std::uint64_t seed,
                  const EmbeddingTable* table, const CauseProfile* profile,
                  const OptimizerBudget& budget = {});

struct GridPoint {
    FeatureConfig config;
    double lambda = 1.0;
};

struct GridSearchResult {
    std::size_t best_index = 0;
    std::vector<CVReport> reports;  // one per grid point, in grid order
};

/// Runs kfold_cv at every grid point under the same seed and returns the
/// argmax of mean fold F1; ties keep the earlier grid point.
GridSearchResult grid_search(std::span<const AnnotatedMessage> corpus,
                             std::span<const int> labels, std::span<const GridPoint> grid,
                             int k, std::uint64_t seed, const EmbeddingTable* table,
                             const CauseProfile* profile,
                             const OptimizerBudget& budget = {});

inline const std::vector<double> kDefaultLambdaGrid = {0.01, 0.1, 1.0, 10.0};

// Model file: versioned JSON document. Saving and re-loading a model gives
// bit-identical predictions.
void save_model(const LogisticModel& model, std::ostream& out);
void save_model_file(const LogisticModel& model, const std::string& path);
LogisticModel load_model(std::istream& in);
LogisticModel load_model_file(const std::string& path);

// JSON round-trip helpers shared with the CLI config.
std::string feature_config_to_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json(const std::string& json_text);

}  // namespace causekit
