#include "causekit/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "causekit/audit.hpp"
#include "causekit/common.hpp"
#include "causekit/io.hpp"
#include "causekit/pipeline.hpp"
#include "causekit/serde.hpp"
#include "causekit/stats.hpp"

namespace fs = std::filesystem;

namespace causekit {

namespace {

using ordered_json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string iso_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }

    RunConfig cfg;
    if (j.contains("cause")) {
        const auto& c = j["cause"];
        cfg.cause_name = c.value("name", cfg.cause_name);
        if (c.contains("seed_keywords")) {
            cfg.seed_keywords = c["seed_keywords"].get<std::vector<std::string>>();
        }
        cfg.expansion_size = c.value("expansion_size", cfg.expansion_size);
    }
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        cfg.embeddings_path = p.value("embeddings", "");
        cfg.messages_path = p.value("messages", "");
        cfg.labels_path = p.value("labels", "");
        cfg.ratings_path = p.value("ratings", "");
        cfg.positive_lexicon_path = p.value("positive_lexicon", "");
        cfg.negative_lexicon_path = p.value("negative_lexicon", "");
    }
    cfg.corpus_format = j.value("format", cfg.corpus_format);
    cfg.threshold = j.value("threshold", cfg.threshold);
    cfg.tau = j.value("tau", cfg.tau);
    cfg.top_k = j.value("top_k", cfg.top_k);
    cfg.folds = j.value("folds", cfg.folds);
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("lambda_grid")) cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    if (j.contains("features")) cfg.features = feature_config_from_json_value(j["features"]);
    if (j.contains("feature_grid")) {
        const auto& g = j["feature_grid"];
        if (g.contains("presets")) {
            cfg.feature_presets = g["presets"].get<std::vector<std::string>>();
        }
        if (g.contains("min_df")) cfg.grid_min_df = g["min_df"].get<std::vector<int>>();
        if (g.contains("max_df")) cfg.grid_max_df = g["max_df"].get<std::vector<double>>();
        if (g.contains("ngram_max")) {
            cfg.grid_ngram_max = g["ngram_max"].get<std::vector<int>>();
        }
    }
    return cfg;
}

namespace {

struct Context {
    RunConfig cfg;
    std::string out_dir = ".";
    bool stamp = false;

    std::string stage = "both";
    int per_entity = 5;
    std::string models_dir;
    std::string support_model_path;
    std::string commitment_model_path;
    std::string classifications_path;
    std::string profiles_path;
};

fs::path out_path(const Context& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    return fs::path(ctx.out_dir) / name;
}

std::ofstream open_out(const Context& ctx, const std::string& name, bool stampable = true) {
    fs::path p = out_path(ctx, name);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    if (ctx.stamp && stampable) out << "# generated_at " << iso_now() << "\n";
    return out;
}

void need_path(const std::string& path, const char* what) {
    if (path.empty()) {
        throw UsageError(std::string("missing ") + what);
    }
    if (!fs::exists(path)) {
        throw UsageError(std::string(what) + " does not exist: " + path);
    }
}

const RunConfig& need_inputs(const Context& ctx, bool embeddings, bool messages,
                             bool labels, bool ratings) {
    const RunConfig& cfg = ctx.cfg;
    if (embeddings) {
        need_path(cfg.embeddings_path, "--embeddings (or paths.embeddings)");
        if (cfg.seed_keywords.empty()) throw UsageError("missing cause.seed_keywords in config");
    }
    if (messages) need_path(cfg.messages_path, "--messages (or paths.messages)");
    if (labels) need_path(cfg.labels_path, "--labels (or paths.labels)");
    if (ratings) need_path(cfg.ratings_path, "--ratings (or paths.ratings)");
    return cfg;
}

Annotator make_annotator(const RunConfig& cfg) {
    if (!cfg.positive_lexicon_path.empty() || !cfg.negative_lexicon_path.empty()) {
        if (cfg.positive_lexicon_path.empty() || cfg.negative_lexicon_path.empty()) {
            throw UsageError("sentiment lexicon override needs both positive and negative paths");
        }
        return Annotator(
            SentimentLexicon::load_files(cfg.positive_lexicon_path, cfg.negative_lexicon_path));
    }
    return Annotator();
}

std::vector<AnnotatedMessage> annotate_all(const std::vector<RawMessage>& corpus,
                                           const Annotator& annotator) {
    std::vector<AnnotatedMessage> out;
    out.reserve(corpus.size());
    for (const auto& m : corpus) out.push_back(annotator.annotate(m));
    return out;
}

// Labeled subset in corpus order, with 4-point labels aligned.
std::pair<std::vector<AnnotatedMessage>, std::vector<int>> labeled_subset(
    const std::vector<RawMessage>& corpus, const std::vector<LabeledExample>& labels,
    const Annotator& annotator) {
    std::map<std::string, int> by_id;
    for (const auto& l : labels) by_id[l.message_id] = l.label;
    std::vector<AnnotatedMessage> msgs;
    std::vector<int> y;
    for (const auto& m : corpus) {
        auto it = by_id.find(m.message_id);
        if (it == by_id.end()) continue;
        msgs.push_back(annotator.annotate(m));
        y.push_back(it->second);
    }
    return {std::move(msgs), std::move(y)};
}

struct NamedConfig {
    std::string name;
    FeatureConfig config;
};

// Grid axes apply to every base config except the sparse-free "embed" preset,
// whose unsatisfiable min_df must stay put.
std::vector<NamedConfig> expand_config_axes(const NamedConfig& base, const RunConfig& cfg) {
    if (base.name == "embed") return {base};
    std::vector<int> min_dfs = cfg.grid_min_df;
    std::vector<double> max_dfs = cfg.grid_max_df;
    std::vector<int> ngram_maxes = cfg.grid_ngram_max;
    if (min_dfs.empty()) min_dfs = {base.config.min_df};
    if (max_dfs.empty()) max_dfs = {base.config.max_df};
    if (ngram_maxes.empty()) ngram_maxes = {base.config.ngram_max};

    std::vector<NamedConfig> out;
    for (int ng : ngram_maxes) {
        for (int mdf : min_dfs) {
            for (double xdf : max_dfs) {
                NamedConfig nc = base;
                nc.config.ngram_max = ng;
                nc.config.min_df = mdf;
                nc.config.max_df = xdf;
                nc.config.validate();
                out.push_back(std::move(nc));
            }
        }
    }
    return out;
}

std::vector<std::pair<std::string, GridPoint>> build_grid(const RunConfig& cfg) {
    std::vector<double> lambdas;
    if (cfg.lambda) {
        lambdas = {*cfg.lambda};
    } else if (!cfg.lambda_grid.empty()) {
        lambdas = cfg.lambda_grid;
    } else {
        lambdas = kDefaultLambdaGrid;
    }

    std::vector<NamedConfig> bases;
    if (cfg.features) {
        bases.push_back({"custom", *cfg.features});
    } else {
        std::vector<std::string> presets = cfg.feature_presets;
        if (presets.empty()) presets = {"bow", "bow+cues", "embed", "best-combination"};
        for (const auto& name : presets) bases.push_back({name, FeatureConfig::preset(name)});
    }

    // Default pruning axes only when the user pinned nothing.
    RunConfig axes = cfg;
    if (!cfg.features && cfg.grid_min_df.empty() && cfg.grid_max_df.empty() &&
        cfg.grid_ngram_max.empty()) {
        axes.grid_min_df = {1, 3, 5};
        axes.grid_max_df = {0.6, 0.8, 1.0};
        axes.grid_ngram_max = {1, 2, 3};
    }

    std::vector<std::pair<std::string, GridPoint>> grid;
    for (const auto& base : bases) {
        for (const auto& variant : expand_config_axes(base, axes)) {
            for (double lambda : lambdas) {
                grid.push_back({variant.name, GridPoint{variant.config, lambda}});
            }
        }
    }
    return grid;
}

// --- subcommands ------------------------------------------------------------

int cmd_filter(const Context& ctx) {
    const RunConfig& cfg = need_inputs(ctx, true, true, false, false);
    EmbeddingTable table = EmbeddingTable::load_file(cfg.embeddings_path);
    CauseProfile profile =
        build_cause_profile(cfg.cause_name, cfg.seed_keywords, table, cfg.expansion_size);
    std::vector<RawMessage> corpus = ingest_messages_file(cfg.messages_path, cfg.corpus_format);

    auto out = open_out(ctx, "filtered.jsonl", false);
    std::size_t kept = 0;
    for (const auto& m : corpus) {
        std::vector<std::string> words;
        for (const auto& t : tokenize(m)) {
            if (t.kind == TokenKind::Word || t.kind == TokenKind::Hashtag) {
                words.push_back(t.surface);
            }
        }
        auto score = relevance_score(words, profile, table);
        if (!score || *score < cfg.threshold) continue;
        ordered_json j;
        j["entity"] = m.entity_id;
        j["id"] = m.message_id;
        j["text"] = m.text;
        j["relevance"] = *score;
        out << j.dump() << "\n";
        ++kept;
    }
    std::cout << "filter: kept " << kept << " of " << corpus.size()
              << " messages at threshold " << format_double(cfg.threshold) << " -> "
              << out_path(ctx, "filtered.jsonl").string() << "\n";
    return 0;
}

int cmd_template(const Context& ctx) {
    const RunConfig& cfg = need_inputs(ctx, true, true, false, false);
    EmbeddingTable table = EmbeddingTable::load_file(cfg.embeddings_path);
    CauseProfile profile =
        build_cause_profile(cfg.cause_name, cfg.seed_keywords, table, cfg.expansion_size);
    std::vector<RawMessage> corpus = ingest_messages_file(cfg.messages_path, cfg.corpus_format);

    auto out = open_out(ctx, "annotation_template.csv");
    emit_annotation_template(corpus, profile, table, cfg.threshold, ctx.per_entity, out);
    std::cout << "template: wrote per-entity top-" << ctx.per_entity
              << " relevant messages -> " << out_path(ctx, "annotation_template.csv").string()
              << "\n";
    return 0;
}

struct LoadedResources {
    std::optional<EmbeddingTable> table;
    std::optional<CauseProfile> profile;
};

LoadedResources load_feature_resources(const RunConfig& cfg, const FeatureConfig& fc) {
    LoadedResources r;
    if (fc.any_dense() || fc.needs_profile()) {
        if (cfg.embeddings_path.empty() || cfg.seed_keywords.empty()) {
            throw UsageError(
                "feature config uses embeddings/keywords: config needs paths.embeddings "
                "and cause.seed_keywords");
        }
        r.table = EmbeddingTable::load_file(cfg.embeddings_path);
        r.profile =
            build_cause_profile(cfg.cause_name, cfg.seed_keywords, *r.table, cfg.expansion_size);
    }
    return r;
}

std::vector<Stage> requested_stages(const std::string& stage) {
    if (stage == "both") return {Stage::Support, Stage::Commitment};
    return {stage_from_string(stage)};
}

int cmd_train(const Context& ctx) {
    const RunConfig& cfg = need_inputs(ctx, false, true, true, false);
    if (!cfg.seed) throw UsageError("train requires --seed (recorded in the model file)");

    std::vector<RawMessage> corpus = ingest_messages_file(cfg.messages_path, cfg.corpus_format);
    std::vector<LabeledExample> labels = ingest_labels_file(cfg.labels_path, corpus);
    Annotator annotator = make_annotator(cfg);
    auto [msgs, y4] = labeled_subset(corpus, labels, annotator);
    if (msgs.empty()) throw std::runtime_error("no labeled messages found in the corpus");

    FeatureConfig fc = cfg.features.value_or(FeatureConfig{});
    const double lambda = cfg.lambda.value_or(1.0);
    LoadedResources res = load_feature_resources(cfg, fc);

    std::string summary = "train:";
    for (Stage stage : requested_stages(ctx.stage)) {
        StageData sd = stage_dataset(msgs, y4, stage);
        LogisticModel model = train_logistic(
            sd.messages, sd.y, fc, lambda, stage,
            res.table ? &*res.table : nullptr, res.profile ? &*res.profile : nullptr,
            OptimizerBudget{}, *cfg.seed);
        const std::string file = std::string(to_string(stage)) + "_model.json";
        save_model_file(model, out_path(ctx, file).string());
        summary += std::string(" ") + to_string(stage) + " |V|=" +
                   std::to_string(model.vocab.size()) +
                   " iters=" + std::to_string(model.meta.iterations) + " -> " +
                   out_path(ctx, file).string() + ";";
    }
    std::cout << summary << "\n";
    return 0;
}

int cmd_cv(const Context& ctx) {
    const RunConfig& cfg = need_inputs(ctx, false, true, true, false);
    if (!cfg.seed) throw UsageError("cv requires --seed (reports embed it)");

    std::vector<RawMessage> corpus = ingest_messages_file(cfg.messages_path, cfg.corpus_format);
    std::vector<LabeledExample> labels = ingest_labels_file(cfg.labels_path, corpus);
    Annotator annotator = make_annotator(cfg);
    auto [msgs, y4] = labeled_subset(corpus, labels, annotator);
    if (msgs.empty()) throw std::runtime_error("no labeled messages found in the corpus");

    auto grid = build_grid(cfg);
    // Resources must satisfy the most demanding grid point.
    FeatureConfig widest;
    for (const auto& [name, gp] : grid) {
        if (gp.config.any_dense() || gp.config.needs_profile()) widest = gp.config;
    }
    LoadedResources res = load_feature_resources(cfg, widest);

    std::string summary = "cv:";
    for (Stage stage : requested_stages(ctx.stage)) {
        StageData sd = stage_dataset(msgs, y4, stage);
        std::vector<GridPoint> points;
        points.reserve(grid.size());
        for (const auto& [name, gp] : grid) points.push_back(gp);
        GridSearchResult result = grid_search(
            sd.messages, sd.y, points, cfg.folds, *cfg.seed,
            res.table ? &*res.table : nullptr, res.profile ? &*res.profile : nullptr);

        ordered_json doc;
        doc["kind"] = "causekit-cv-report";
        doc["stage"] = to_string(stage);
        doc["k"] = cfg.folds;
        doc["seed"] = *cfg.seed;
        doc["grid_size"] = grid.size();
        doc["best_index"] = result.best_index;
        doc["best"] = {{"preset", grid[result.best_index].first},
                       {"lambda", result.reports[result.best_index].lambda},
                       {"mean_f1", result.reports[result.best_index].mean_f1},
                       {"config", feature_config_to_ordered_json(
                                      result.reports[result.best_index].config)}};
        doc["reports"] = ordered_json::array();
        for (std::size_t i = 0; i < result.reports.size(); ++i) {
            ordered_json r = cv_report_to_json(result.reports[i]);
            r["preset"] = grid[i].first;
            doc["reports"].push_back(std::move(r));
        }
        if (ctx.stamp) doc["generated_at"] = iso_now();

        const std::string file = std::string("cv_") + to_string(stage) + ".json";
        auto out = open_out(ctx, file, false);
        out << doc.dump(2) << "\n";
        summary += std::string(" ") + to_string(stage) +
                   " best_mean_f1=" + format_double(result.reports[result.best_index].mean_f1) +
                   " (grid " + std::to_string(grid.size()) + ") -> " +
                   out_path(ctx, file).string() + ";";
    }
    std::cout << summary << "\n";
    return 0;
}

int cmd_classify(const Context& ctx) {
    const RunConfig& cfg = need_inputs(ctx, true, true, false, false);
    std::string support_path = ctx.support_model_path;
    std::string commit_path = ctx.commitment_model_path;
    if (support_path.empty() && !ctx.models_dir.empty()) {
        support_path = (fs::path(ctx.models_dir) / "support_model.json").string();
    }
    if (commit_path.empty() && !ctx.models_dir.empty()) {
        commit_path = (fs::path(ctx.models_dir) / "commitment_model.json").string();
    }
    if (support_path.empty() || commit_path.empty()) {
        throw UsageError("classify needs --models DIR or --support-model/--commitment-model");
    }
    need_path(support_path, "support model file");
    need_path(commit_path, "commitment model file");

    EmbeddingTable table = EmbeddingTable::load_file(cfg.embeddings_path);
    CauseProfile profile =
        build_cause_profile(cfg.cause_name, cfg.seed_keywords, table, cfg.expansion_size);
    LogisticModel support = load_model_file(support_path);
    LogisticModel commitment = load_model_file(commit_path);
    std::vector<RawMessage> corpus = ingest_messages_file(cfg.messages_path, cfg.corpus_format);
    Annotator annotator = make_annotator(cfg);
    std::vector<AnnotatedMessage> annotated = annotate_all(corpus, annotator);

    ClassifyOptions options;
    options.relevance_threshold = cfg.threshold;
    CorpusRun run = classify_corpus(annotated, support, commitment, profile, table, options);

    auto out = open_out(ctx, "classifications.jsonl", false);
    write_classifications_jsonl(run.results, out);
    for (const auto& e : run.errors) {
        std::cerr << "classify: message " << e.message_id << " skipped: " << e.what << "\n";
    }

    std::map<FinalLabel, std::size_t> counts;
    for (const auto& c : run.results) ++counts[c.final_label];
    std::cout << "classify: " << run.results.size() << " messages (irrelevant "
              << counts[FinalLabel::Irrelevant] << ", non_support "
              << counts[FinalLabel::NonSupport] << ", low_commit "
              << counts[FinalLabel::LowCommit] << ", high_commit "
              << counts[FinalLabel::HighCommit] << ", errors " << run.errors.size()
              << ") -> " << out_path(ctx, "classifications.jsonl").string() << "\n";
    return run.errors.empty() ? 0 : 1;
}

int cmd_aggregate(const Context& ctx) {
    need_path(ctx.classifications_path, "--classifications");
    std::ifstream in(ctx.classifications_path);
    if (!in) throw std::runtime_error("cannot open " + ctx.classifications_path);
    std::vector<MessageClassification> records = read_classifications_jsonl(in);

    std::map<std::string, std::vector<MessageClassification>> by_entity;
    for (auto& r : records) by_entity[r.entity_id].push_back(std::move(r));

    std::vector<EntityProfile> profiles;
    profiles.reserve(by_entity.size());
    for (const auto& [entity, list] : by_entity) {
        profiles.push_back(aggregate_entity(list, ctx.cfg.tau));
    }

    auto out = open_out(ctx, "profiles.json", false);
    write_profiles_json(profiles, ctx.cfg.tau, out);
    std::cout << "aggregate: " << profiles.size() << " entities over " << records.size()
              << " messages (tau " << format_double(ctx.cfg.tau) << ") -> "
              << out_path(ctx, "profiles.json").string() << "\n";
    return 0;
}

std::vector<EntityProfile> load_rated_profiles(const Context& ctx, double* tau_out) {
    need_path(ctx.profiles_path, "--profiles");
    std::ifstream in(ctx.profiles_path);
    if (!in) throw std::runtime_error("cannot open " + ctx.profiles_path);
    std::vector<EntityProfile> profiles = read_profiles_json(in, tau_out);

    const RunConfig& cfg = need_inputs(ctx, false, false, false, true);
    std::map<std::string, double> ratings = ingest_ratings_file(cfg.ratings_path);
    for (auto& p : profiles) {
        auto it = ratings.find(p.entity_id);
        if (it != ratings.end()) p.rating = it->second;
    }
    return profiles;
}

int cmd_correlate(const Context& ctx) {
    double tau = ctx.cfg.tau;
    std::vector<EntityProfile> profiles = load_rated_profiles(ctx, &tau);

    std::vector<EntityDesignRow> rows;
    std::size_t skipped = 0;
    for (const auto& p : profiles) {
        if (!p.rating) {
            ++skipped;
            continue;
        }
        EntityDesignRow r;
        r.entity_id = p.entity_id;
        r.x1 = log1p_count(p.confident_non_support);
        r.x2 = log1p_count(p.confident_low);
        r.x3 = log1p_count(p.confident_high);
        r.y = *p.rating;
        rows.push_back(std::move(r));
    }
    RegressionResult result = ols_fit(rows);
    if (result.condition_estimate > 1e8) {
        std::cerr << "correlate: warning: ill-conditioned design (condition estimate "
                  << format_double(result.condition_estimate) << ")\n";
    }

    {
        auto out = open_out(ctx, "regression.csv");
        write_regression_csv(result, out);
    }
    const char* scatter_names[3] = {"scatter_non_support.csv", "scatter_low_commit.csv",
                                    "scatter_high_commit.csv"};
    for (int pred = 1; pred <= 3; ++pred) {
        auto out = open_out(ctx, scatter_names[pred - 1]);
        write_scatter_csv(rows, pred, out);
    }

    std::cout << "correlate: n=" << result.n << " r2=" << format_double(result.r_squared)
              << " beta=[";
    for (std::size_t i = 0; i < result.coefficients.size(); ++i) {
        std::cout << (i ? " " : "") << format_double(result.coefficients[i]);
    }
    std::cout << "] skipped_unrated=" << skipped << " (tau "
              << format_double(tau) << ") -> " << out_path(ctx, "regression.csv").string()
              << "\n";
    return 0;
}

int cmd_audit(const Context& ctx) {
    double tau = ctx.cfg.tau;
    std::vector<EntityProfile> profiles = load_rated_profiles(ctx, &tau);
    AuditReport report =
        flag_inauthentic(profiles, static_cast<std::size_t>(ctx.cfg.top_k), tau);

    std::map<std::string, std::string> text_by_id;
    if (!ctx.cfg.messages_path.empty()) {
        for (const auto& m : ingest_messages_file(ctx.cfg.messages_path, ctx.cfg.corpus_format)) {
            text_by_id[m.message_id] = m.text;
        }
    }

    {
        auto out = open_out(ctx, "audit.json", false);
        write_audit_json(report, out);
    }
    {
        auto out = open_out(ctx, "audit.txt");
        write_audit_text(report, out);
    }
    {
        auto out = open_out(ctx, "evidence.csv");
        write_evidence_csv(report, text_by_id, out);
    }
    std::cout << "audit: intersection " << report.intersection.size() << ", flagged "
              << report.flagged.size() << " below rating mean "
              << format_double(report.rating_mean) << " -> "
              << out_path(ctx, "audit.json").string() << "\n";
    return 0;
}

int cmd_sentiment_report(const Context& ctx) {
    const RunConfig& cfg = need_inputs(ctx, false, true, true, false);
    std::vector<RawMessage> corpus = ingest_messages_file(cfg.messages_path, cfg.corpus_format);
    std::vector<LabeledExample> labels = ingest_labels_file(cfg.labels_path, corpus);
    Annotator annotator = make_annotator(cfg);
    auto [msgs, y4] = labeled_subset(corpus, labels, annotator);

    long counts[4][3] = {};
    for (std::size_t i = 0; i < msgs.size(); ++i) {
        int pol = msgs[i].polarity == Polarity::Pos ? 0 : msgs[i].polarity == Polarity::Neg ? 1 : 2;
        ++counts[y4[i]][pol];
    }

    auto out = open_out(ctx, "sentiment_report.csv");
    out << "label,positive,negative,neutral,messages\n";
    for (int label = 0; label < 4; ++label) {
        const long total = counts[label][0] + counts[label][1] + counts[label][2];
        if (total > 0) {
            out << label << ',' << format_double(static_cast<double>(counts[label][0]) / total)
                << ',' << format_double(static_cast<double>(counts[label][1]) / total) << ','
                << format_double(static_cast<double>(counts[label][2]) / total) << ',' << total
                << "\n";
        } else {
            out << label << ",0,0,0,0\n";
        }
    }
    std::cout << "sentiment-report: " << msgs.size() << " labeled messages -> "
              << out_path(ctx, "sentiment_report.csv").string() << "\n";
    return 0;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args) {
    CLI::App app{"cause-commitment classification and messaging audit toolkit", "causekit"};
    app.require_subcommand(1);

    Context ctx;
    std::string config_path;

    // flag-level overrides; applied on top of the config file after parsing
    std::optional<std::string> opt_messages, opt_embeddings, opt_labels, opt_ratings;
    std::optional<std::string> opt_format;
    std::optional<double> opt_threshold, opt_tau, opt_lambda;
    std::optional<int> opt_top_k, opt_folds;
    std::optional<std::uint64_t> opt_seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config document");
        sub->add_option("--out", ctx.out_dir, "output directory (default .)");
        sub->add_flag("--stamp", ctx.stamp, "add a generation timestamp to reports");
        sub->add_option("--messages", opt_messages, "corpus file (JSONL default)");
        sub->add_option("--embeddings", opt_embeddings, "word-embedding text file");
        sub->add_option("--labels", opt_labels, "labels CSV (message_id,label)");
        sub->add_option("--ratings", opt_ratings, "ratings CSV (entity,rating)");
        sub->add_option("--format", opt_format, "corpus format: jsonl or csv")
            ->check(CLI::IsMember({"jsonl", "csv"}));
        sub->add_option("--seed", opt_seed, "RNG seed (required for train/cv)");
        sub->add_option("--threshold", opt_threshold, "relevance threshold (default 0.3)");
        sub->add_option("--tau", opt_tau, "confidence threshold (default 0.7)");
        sub->add_option("--top-k", opt_top_k, "top-k per audit metric (default 50)");
        sub->add_option("--folds", opt_folds, "cross-validation folds (default 10)");
        sub->add_option("--lambda", opt_lambda, "L2 regularization strength");
    };

    CLI::App* filter = app.add_subcommand("filter", "keep cause-relevant messages");
    CLI::App* templ = app.add_subcommand("template", "emit the annotation worksheet");
    CLI::App* train = app.add_subcommand("train", "train the stage classifiers");
    CLI::App* cv = app.add_subcommand("cv", "cross-validate / grid-search configurations");
    CLI::App* classify = app.add_subcommand("classify", "run the two-stage pipeline");
    CLI::App* aggregate = app.add_subcommand("aggregate", "build per-entity profiles");
    CLI::App* correlate = app.add_subcommand("correlate", "OLS of ratings on log class counts");
    CLI::App* audit = app.add_subcommand("audit", "flag potentially inauthentic entities");
    CLI::App* sentiment = app.add_subcommand("sentiment-report", "polarity ratios per label");
    for (CLI::App* sub :
         {filter, templ, train, cv, classify, aggregate, correlate, audit, sentiment}) {
        add_common(sub);
    }
    templ->add_option("--per-entity", ctx.per_entity, "messages per entity (default 5)");
    train->add_option("--stage", ctx.stage, "support, commitment, or both")
        ->check(CLI::IsMember({"support", "commitment", "both"}));
    cv->add_option("--stage", ctx.stage, "support, commitment, or both")
        ->check(CLI::IsMember({"support", "commitment", "both"}));
    classify->add_option("--models", ctx.models_dir, "directory holding the model files");
    classify->add_option("--support-model", ctx.support_model_path, "support model file");
    classify->add_option("--commitment-model", ctx.commitment_model_path,
                         "commitment model file");
    aggregate->add_option("--classifications", ctx.classifications_path,
                          "classifications JSONL from classify");
    correlate->add_option("--profiles", ctx.profiles_path, "profiles JSON from aggregate");
    audit->add_option("--profiles", ctx.profiles_path, "profiles JSON from aggregate");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("causekit");
    for (const auto& a : args) argv_store.push_back(a);
    std::vector<char*> argv;
    argv.reserve(argv_store.size());
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) ctx.cfg = RunConfig::from_json_file(config_path);
        if (opt_messages) ctx.cfg.messages_path = *opt_messages;
        if (opt_embeddings) ctx.cfg.embeddings_path = *opt_embeddings;
        if (opt_labels) ctx.cfg.labels_path = *opt_labels;
        if (opt_ratings) ctx.cfg.ratings_path = *opt_ratings;
        if (opt_format) ctx.cfg.corpus_format = *opt_format;
        if (opt_threshold) ctx.cfg.threshold = *opt_threshold;
        if (opt_tau) ctx.cfg.tau = *opt_tau;
        if (opt_top_k) ctx.cfg.top_k = *opt_top_k;
        if (opt_folds) ctx.cfg.folds = *opt_folds;
        if (opt_lambda) ctx.cfg.lambda = *opt_lambda;
        if (opt_seed) ctx.cfg.seed = *opt_seed;

        if (ctx.cfg.threshold < -1.0 || ctx.cfg.threshold > 1.0) {
            throw UsageError("--threshold must be in [-1, 1]");
        }
        if (ctx.cfg.tau < 0.0 || ctx.cfg.tau > 1.0) throw UsageError("--tau must be in [0, 1]");
        if (ctx.cfg.top_k < 1) throw UsageError("--top-k must be >= 1");
        if (ctx.cfg.folds < 2) throw UsageError("--folds must be >= 2");
        if (ctx.cfg.lambda && *ctx.cfg.lambda < 0.0) {
            throw UsageError("--lambda must be >= 0");
        }
        if (ctx.cfg.expansion_size < 0) {
            throw UsageError("cause.expansion_size must be >= 0");
        }

        if (filter->parsed()) return cmd_filter(ctx);
        if (templ->parsed()) return cmd_template(ctx);
        if (train->parsed()) return cmd_train(ctx);
        if (cv->parsed()) return cmd_cv(ctx);
        if (classify->parsed()) return cmd_classify(ctx);
        if (aggregate->parsed()) return cmd_aggregate(ctx);
        if (correlate->parsed()) return cmd_correlate(ctx);
        if (audit->parsed()) return cmd_audit(ctx);
        if (sentiment->parsed()) return cmd_sentiment_report(ctx);
        std::cerr << "causekit: no subcommand selected\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "causekit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "causekit: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace causekit
