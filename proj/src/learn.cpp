#include "causekit/learn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "causekit/common.hpp"
#include "causekit/rng.hpp"
#include "causekit/serde.hpp"

namespace causekit {

Metrics prf1(std::span<const int> y_true, std::span<const int> y_pred, int positive) {
    if (y_true.size() != y_pred.size() || y_true.empty()) {
        throw std::invalid_argument("prf1: label lists must be nonempty and equal length");
    }
    Metrics m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool t = y_true[i] == positive;
        const bool p = y_pred[i] == positive;
        if (t && p) ++m.tp;
        else if (!t && p) ++m.fp;
        else if (t && !p) ++m.fn;
        else ++m.tn;
    }
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

const char* to_string(Stage s) {
    return s == Stage::Support ? "support" : "commitment";
}

Stage stage_from_string(std::string_view s) {
    if (s == "support") return Stage::Support;
    if (s == "commitment") return Stage::Commitment;
    throw std::invalid_argument("unknown stage: " + std::string(s));
}

namespace {

double log1pexp(double m) {
    return m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double sigmoid(double m) {
    return m >= 0.0 ? 1.0 / (1.0 + std::exp(-m)) : std::exp(m) / (1.0 + std::exp(m));
}

// Margin w.x + b; sparse indices address [0, n_sparse) and the dense block
// occupies the trailing |dense| weights.
double margin(std::span<const double> w, double b, const FeatureVector& fv) {
    const std::size_t n_sparse = w.size() - fv.dense.size();
    double m = b;
    for (const auto& [idx, value] : fv.sparse) {
        if (idx >= n_sparse) {
            throw std::invalid_argument("feature vector does not match weight layout");
        }
        m += w[idx] * value;
    }
    for (std::size_t j = 0; j < fv.dense.size(); ++j) {
        m += w[n_sparse + j] * fv.dense[j];
    }
    return m;
}

void validate_batch(std::span<const FeatureVector> X, std::span<const int> y) {
    if (X.empty() || X.size() != y.size()) {
        throw std::invalid_argument("training batch empty or misaligned with labels");
    }
    const std::size_t dense_size = X.front().dense.size();
    for (const auto& fv : X) {
        if (fv.dense.size() != dense_size) {
            throw std::invalid_argument("mixed dense widths in one batch");
        }
        for (const auto& [idx, value] : fv.sparse) {
            if (!std::isfinite(value)) {
                throw std::invalid_argument("non-finite sparse feature value");
            }
        }
        for (double v : fv.dense) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite dense feature value");
        }
    }
    for (int label : y) {
        if (label != 0 && label != 1) {
            throw std::invalid_argument("labels must be binary 0/1");
        }
    }
}

double loss_only(std::span<const double> w, double b, std::span<const FeatureVector> X,
                 std::span<const int> y, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double m = margin(w, b, X[i]);
        loss += log1pexp(m) - y[i] * m;
    }
    loss /= static_cast<double>(X.size());
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;
    return loss + 0.5 * lambda * reg;
}

}  // namespace

LossGrad loss_and_gradient(std::span<const double> weights, double bias,
                           std::span<const FeatureVector> X, std::span<const int> y,
                           double lambda) {
    validate_batch(X, y);
    const std::size_t dense_size = X.front().dense.size();
    const std::size_t n_sparse = weights.size() - dense_size;
    const double inv_n = 1.0 / static_cast<double>(X.size());

    LossGrad out;
    out.grad_weights.assign(weights.size(), 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double m = margin(weights, bias, X[i]);
        out.loss += log1pexp(m) - y[i] * m;
        const double r = sigmoid(m) - y[i];
        for (const auto& [idx, value] : X[i].sparse) {
            out.grad_weights[idx] += r * value;
        }
        for (std::size_t j = 0; j < dense_size; ++j) {
            out.grad_weights[n_sparse + j] += r * X[i].dense[j];
        }
        out.grad_bias += r;
    }
    out.loss *= inv_n;
    out.grad_bias *= inv_n;
    double reg = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        out.grad_weights[j] = out.grad_weights[j] * inv_n + lambda * weights[j];
        reg += weights[j] * weights[j];
    }
    out.loss += 0.5 * lambda * reg;
    if (!std::isfinite(out.loss)) {
        throw std::runtime_error("loss_and_gradient: non-finite loss");
    }
    return out;
}

FitResult fit_logistic(std::span<const FeatureVector> X, std::span<const int> y,
                       double lambda, std::size_t n_sparse_columns,
                       const OptimizerBudget& budget) {
    validate_batch(X, y);
    if (lambda < 0.0) throw std::invalid_argument("fit_logistic: lambda must be >= 0");
    const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
    const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("fit_logistic: degenerate labels (single class)");
    }
    for (const auto& fv : X) {
        for (const auto& [idx, value] : fv.sparse) {
            if (idx >= n_sparse_columns) {
                throw std::invalid_argument("fit_logistic: sparse index out of layout");
            }
        }
    }
    const std::size_t width = n_sparse_columns + X.front().dense.size();

    FitResult fit;
    fit.weights.assign(width, 0.0);
    fit.bias = 0.0;

    constexpr double kArmijo = 1e-4;
    double step = 1.0;
    int iter = 0;
    double grad_norm = 0.0;
    for (; iter < budget.max_iterations; ++iter) {
        LossGrad lg = loss_and_gradient(fit.weights, fit.bias, X, y, lambda);
        grad_norm = std::abs(lg.grad_bias);
        double grad_sq = lg.grad_bias * lg.grad_bias;
        for (double g : lg.grad_weights) {
            grad_norm = std::max(grad_norm, std::abs(g));
            grad_sq += g * g;
        }
        if (grad_norm < budget.grad_tolerance) break;

        // Backtracking line search along -grad, warm-started from twice the
        // last accepted step.
        step = std::min(step * 2.0, 1e8);
        std::vector<double> trial(width);
        double trial_bias = 0.0;
        for (;;) {
            for (std::size_t j = 0; j < width; ++j) {
                trial[j] = fit.weights[j] - step * lg.grad_weights[j];
            }
            trial_bias = fit.bias - step * lg.grad_bias;
            const double trial_loss = loss_only(trial, trial_bias, X, y, lambda);
            if (trial_loss <= lg.loss - kArmijo * step * grad_sq) break;
            step *= 0.5;
            if (step < 1e-20) break;  // flat to machine precision
        }
        if (step < 1e-20) break;
        fit.weights.swap(trial);
        fit.bias = trial_bias;
    }

    fit.meta.iterations = iter;
    fit.meta.final_grad_norm = grad_norm;
    return fit;
}

double predict_proba(std::span<const double> weights, double bias, const FeatureVector& fv) {
    if (fv.dense.size() > weights.size()) {
        throw std::invalid_argument("predict_proba: dense block wider than weights");
    }
    const double p = sigmoid(margin(weights, bias, fv));
    return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

double predict_proba(const LogisticModel& model, const FeatureVector& fv) {
    if (fv.dense.size() != model.dense_width ||
        model.weights.size() != model.vocab.size() + model.dense_width) {
        throw std::invalid_argument("predict_proba: feature vector does not match model layout");
    }
    return predict_proba(model.weights, model.bias, fv);
}

namespace {

std::uint64_t digest_training_set(std::span<const AnnotatedMessage> corpus,
                                  std::span<const int> labels) {
    std::string buf;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        buf += corpus[i].raw.message_id;
        buf += '\x1f';
        buf += std::to_string(labels[i]);
        buf += '\x1e';
    }
    return fnv1a64(buf);
}

}  // namespace

LogisticModel train_logistic(std::span<const AnnotatedMessage> corpus,
                             std::span<const int> labels, const FeatureConfig& config,
                             double lambda, Stage stage, const EmbeddingTable* table,
                             const CauseProfile* profile, const OptimizerBudget& budget,
                             std::uint64_t seed) {
    if (corpus.size() != labels.size() || corpus.empty()) {
        throw std::invalid_argument("train_logistic: corpus/labels empty or misaligned");
    }
    LogisticModel model;
    model.stage = stage;
    model.config = config;
    model.vocab = build_vocabulary(corpus, config, profile);
    model.dense_width = dense_layout(config, table ? table->dimension() : 0).width;
    model.lambda = lambda;
    model.corpus_digest = digest_training_set(corpus, labels);

    std::vector<FeatureVector> X;
    X.reserve(corpus.size());
    for (const auto& msg : corpus) {
        X.push_back(featurize(msg, model.vocab, config, table, profile));
    }
    FitResult fit = fit_logistic(X, labels, lambda, model.vocab.size(), budget);
    model.weights = std::move(fit.weights);
    model.bias = fit.bias;
    model.meta = fit.meta;
    model.meta.seed = seed;
    return model;
}

CVReport kfold_cv(std::span<const AnnotatedMessage> corpus, std::span<const int> labels,
                  const FeatureConfig& config, double lambda, int k, std::uint64_t seed,
                  const EmbeddingTable* table, const CauseProfile* profile,
                  const OptimizerBudget& budget) {
    if (k < 2) throw std::invalid_argument("kfold_cv: k must be >= 2");
    if (corpus.size() != labels.size() || corpus.empty()) {
        throw std::invalid_argument("kfold_cv: corpus/labels empty or misaligned");
    }
    long n_pos = std::count(labels.begin(), labels.end(), 1);
    long n_neg = std::count(labels.begin(), labels.end(), 0);
    if (n_pos < k || n_neg < k) {
        throw std::invalid_argument("kfold_cv: a class has fewer than k members");
    }

    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    // Deal each class round-robin across folds in shuffled order.
    std::vector<int> fold_of(corpus.size());
    int next_fold[2] = {0, 0};
    for (std::size_t idx : order) {
        int cls = labels[idx];
        fold_of[idx] = next_fold[cls];
        next_fold[cls] = (next_fold[cls] + 1) % k;
    }

    CVReport report;
    report.k = k;
    report.seed = seed;
    report.config = config;
    report.lambda = lambda;

    for (int fold = 0; fold < k; ++fold) {
        std::vector<AnnotatedMessage> train_msgs, test_msgs;
        std::vector<int> train_y, test_y;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (fold_of[i] == fold) {
                test_msgs.push_back(corpus[i]);
                test_y.push_back(labels[i]);
            } else {
                train_msgs.push_back(corpus[i]);
                train_y.push_back(labels[i]);
            }
        }
        Vocabulary vocab = build_vocabulary(train_msgs, config, profile);
        std::vector<FeatureVector> X_train;
        X_train.reserve(train_msgs.size());
        for (const auto& m : train_msgs) {
            X_train.push_back(featurize(m, vocab, config, table, profile));
        }
        FitResult fit = fit_logistic(X_train, train_y, lambda, vocab.size(), budget);

        std::vector<int> pred;
        pred.reserve(test_msgs.size());
        for (const auto& m : test_msgs) {
            FeatureVector fv = featurize(m, vocab, config, table, profile);
            pred.push_back(predict_proba(fit.weights, fit.bias, fv) > 0.5 ? 1 : 0);
        }
        report.folds.push_back(prf1(test_y, pred, 1));
    }

    double sum = 0.0;
    for (const auto& m : report.folds) sum += m.f1;
    report.mean_f1 = sum / static_cast<double>(report.folds.size());
    return report;
}

GridSearchResult grid_search(std::span<const AnnotatedMessage> corpus,
                             std::span<const int> labels, std::span<const GridPoint> grid,
                             int k, std::uint64_t seed, const EmbeddingTable* table,
                             const CauseProfile* profile, const OptimizerBudget& budget) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    GridSearchResult result;
    double best = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CVReport report =
            kfold_cv(corpus, labels, grid[i].config, grid[i].lambda, k, seed, table, profile, budget);
        if (report.mean_f1 > best) {
            best = report.mean_f1;
            result.best_index = i;
        }
        result.reports.push_back(std::move(report));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using json = nlohmann::ordered_json;

json config_to_json(const FeatureConfig& c) {
    json j;
    j["ngram_min"] = c.ngram_min;
    j["ngram_max"] = c.ngram_max;
    j["min_df"] = c.min_df;
    j["max_df"] = c.max_df;
    j["negation"] = c.use_negation;
    j["persons"] = c.use_persons;
    j["keyword_count"] = c.use_keyword_count;
    j["context_words"] = c.use_context_words;
    j["self_interactions"] = c.use_self_interactions;
    j["pos_counts"] = c.use_pos_counts;
    j["message_vector"] = c.dense_message_vector;
    j["keywords_vector"] = c.dense_keywords_vector;
    j["context_vector"] = c.dense_context_vector;
    j["relevance_scalar"] = c.dense_relevance;
    j["keywords_n"] = c.keywords_n;
    j["context_window"] = c.context_window;
    return j;
}

FeatureConfig config_from_json(const nlohmann::json& j) {
    FeatureConfig c;
    c.ngram_min = j.value("ngram_min", c.ngram_min);
    c.ngram_max = j.value("ngram_max", c.ngram_max);
    c.min_df = j.value("min_df", c.min_df);
    c.max_df = j.value("max_df", c.max_df);
    c.use_negation = j.value("negation", c.use_negation);
    c.use_persons = j.value("persons", c.use_persons);
    c.use_keyword_count = j.value("keyword_count", c.use_keyword_count);
    c.use_context_words = j.value("context_words", c.use_context_words);
    c.use_self_interactions = j.value("self_interactions", c.use_self_interactions);
    c.use_pos_counts = j.value("pos_counts", c.use_pos_counts);
    c.dense_message_vector = j.value("message_vector", c.dense_message_vector);
    c.dense_keywords_vector = j.value("keywords_vector", c.dense_keywords_vector);
    c.dense_context_vector = j.value("context_vector", c.dense_context_vector);
    c.dense_relevance = j.value("relevance_scalar", c.dense_relevance);
    c.keywords_n = j.value("keywords_n", c.keywords_n);
    c.context_window = j.value("context_window", c.context_window);
    c.validate();
    return c;
}

char hex_digit(std::uint64_t v) {
    return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10));
}

std::string u64_hex(std::uint64_t v) {
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = hex_digit(v & 0xf);
        v >>= 4;
    }
    return s;
}

}  // namespace

std::string feature_config_to_json(const FeatureConfig& config) {
    return config_to_json(config).dump(2);
}

FeatureConfig feature_config_from_json(const std::string& json_text) {
    return config_from_json(nlohmann::json::parse(json_text));
}

nlohmann::ordered_json feature_config_to_ordered_json(const FeatureConfig& config) {
    return config_to_json(config);
}

FeatureConfig feature_config_from_json_value(const nlohmann::json& j) {
    return config_from_json(j);
}

nlohmann::ordered_json cv_report_to_json(const CVReport& report) {
    json j;
    j["k"] = report.k;
    j["seed"] = report.seed;
    j["lambda"] = report.lambda;
    j["config"] = config_to_json(report.config);
    j["mean_f1"] = report.mean_f1;
    j["folds"] = json::array();
    for (const auto& m : report.folds) {
        j["folds"].push_back({{"precision", m.precision},
                              {"recall", m.recall},
                              {"f1", m.f1},
                              {"tp", m.tp},
                              {"fp", m.fp},
                              {"fn", m.fn},
                              {"tn", m.tn}});
    }
    return j;
}

void save_model(const LogisticModel& model, std::ostream& out) {
    json j;
    j["format_version"] = 1;
    j["kind"] = "causekit-logistic-model";
    j["stage"] = to_string(model.stage);
    j["lambda"] = model.lambda;
    j["bias"] = model.bias;
    j["dense_width"] = model.dense_width;
    j["weights"] = model.weights;
    j["config"] = config_to_json(model.config);
    j["vocabulary"] = {{"names", model.vocab.names()},
                       {"doc_freq", model.vocab.doc_frequencies()}};
    j["training"] = {{"iterations", model.meta.iterations},
                     {"final_grad_norm", model.meta.final_grad_norm},
                     {"seed", model.meta.seed}};
    j["corpus_digest"] = u64_hex(model.corpus_digest);
    out << j.dump(2) << "\n";
}

void save_model_file(const LogisticModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    save_model(model, out);
}

LogisticModel load_model(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("kind", "") != "causekit-logistic-model") {
        throw std::runtime_error("not a causekit model file");
    }
    if (j.value("format_version", 0) != 1) {
        throw std::runtime_error("unsupported model format version");
    }
    LogisticModel model;
    model.stage = stage_from_string(j.at("stage").get<std::string>());
    model.lambda = j.at("lambda").get<double>();
    model.bias = j.at("bias").get<double>();
    model.dense_width = j.at("dense_width").get<std::size_t>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.config = config_from_json(j.at("config"));
    model.vocab = Vocabulary(j.at("vocabulary").at("names").get<std::vector<std::string>>(),
                             j.at("vocabulary").at("doc_freq").get<std::vector<std::uint32_t>>());
    model.meta.iterations = j.at("training").at("iterations").get<int>();
    model.meta.final_grad_norm = j.at("training").at("final_grad_norm").get<double>();
    model.meta.seed = j.at("training").at("seed").get<std::uint64_t>();
    model.corpus_digest = std::stoull(j.at("corpus_digest").get<std::string>(), nullptr, 16);
    if (model.weights.size() != model.vocab.size() + model.dense_width) {
        throw std::runtime_error("model file weight layout is inconsistent");
    }
    return model;
}

LogisticModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_model(in);
}

}  // namespace causekit
