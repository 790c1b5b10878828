#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "causekit/cli.hpp"
#include "causekit/io.hpp"
#include "causekit/learn.hpp"

using namespace causekit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("causekit_test_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The gate-passing four-pool world used across the CLI tests.
void write_world(const TempDir& dir, bool with_seed = true) {
    const std::vector<std::vector<std::string>> pools = {
        {"pollution", "energy", "water", "bill"},
        {"climate", "legislation", "voted", "introduced"},
        {"planet", "earth", "love", "today", "great"},
        {"planting", "trees", "conserve", "protect", "forests"},
    };
    std::vector<RawMessage> corpus;
    std::ostringstream labels;
    labels << "message_id,label\n";
    int id = 0;
    for (int label = 0; label < 4; ++label) {
        for (int i = 0; i < 10; ++i) {
            std::string text;
            for (int k = 0; k < 4; ++k) {
                if (!text.empty()) text += ' ';
                text += pools[label][(i + k) % pools[label].size()];
            }
            corpus.push_back({"e" + std::to_string(id % 4), "m" + std::to_string(id), text});
            labels << "m" << id << "," << label << "\n";
            ++id;
        }
    }
    corpus.push_back({"e0", "m40", "zzz qqq xxx"});
    corpus.push_back({"e1", "m41", "quarterly earnings sale discount"});
    corpus.push_back({"e2", "m42", "profit sale discount earnings"});
    corpus.push_back({"e3", "m43", "football game score team"});

    {
        std::ofstream out(dir.file("corpus.jsonl"));
        write_messages_jsonl(corpus, out);
    }
    {
        std::ofstream out(dir.file("labels.csv"));
        out << labels.str();
    }
    {
        std::ofstream out(dir.file("ratings.csv"));
        out << "entity,rating\ne0,3\ne1,5\ne2,7\ne3,9\n";
    }
    nlohmann::ordered_json cfg;
    cfg["cause"] = {{"name", "eco"},
                    {"seed_keywords", {"environment", "ecosystem", "climate", "ecology"}},
                    {"expansion_size", 20}};
    cfg["paths"] = {{"embeddings", std::string(CAUSEKIT_DATA_DIR) + "/toy_embeddings.txt"},
                    {"messages", dir.file("corpus.jsonl")},
                    {"labels", dir.file("labels.csv")},
                    {"ratings", dir.file("ratings.csv")}};
    cfg["threshold"] = 0.3;
    cfg["tau"] = 0.7;
    cfg["top_k"] = 50;
    cfg["folds"] = 5;
    if (with_seed) cfg["seed"] = 42;
    cfg["lambda"] = 0.1;
    cfg["features"] = {{"ngram_min", 1}, {"ngram_max", 1}, {"min_df", 1}, {"max_df", 1.0}};
    std::ofstream out(dir.file(with_seed ? "config.json" : "config_no_seed.json"));
    out << cfg.dump(2) << "\n";
}

// Synthetic classifications for 30 entities with planted confident counts.
void write_planted_classifications(const std::string& path, const std::string& ratings_path,
                                   std::string* planted_entity) {
    std::vector<MessageClassification> records;
    std::ostringstream ratings;
    ratings << "entity,rating\n";
    double rating_sum = 0.0;
    for (int i = 0; i < 30; ++i) {
        const std::string entity = (i < 10 ? "s0" : "s") + std::to_string(i);
        const long high = i;
        const long low = (i * 3) % 7;
        const long ns = (i * 5) % 11;
        long emitted = 0;
        auto add = [&](FinalLabel label, std::optional<double> ps,
                       std::optional<double> ph) {
            MessageClassification c;
            c.entity_id = entity;
            c.message_id = entity + "_m" + std::to_string(emitted++);
            c.final_label = label;
            c.relevance = label == FinalLabel::Irrelevant ? RelevanceScore{} : RelevanceScore{0.6};
            c.p_support = ps;
            c.p_high = ph;
            records.push_back(std::move(c));
        };
        for (long j = 0; j < high; ++j) add(FinalLabel::HighCommit, 0.95, 0.95);
        for (long j = 0; j < low; ++j) add(FinalLabel::LowCommit, 0.9, 0.05);
        for (long j = 0; j < ns; ++j) add(FinalLabel::NonSupport, 0.04, std::nullopt);
        while (emitted < 60) add(FinalLabel::Irrelevant, std::nullopt, std::nullopt);

        double rating;
        if (i == 29) {
            rating = 0.1;  // the planted talker with a rock-bottom rating
            *planted_entity = entity;
        } else {
            rating = 5.0 + 0.05 * i;
        }
        rating_sum += rating;
        ratings << entity << "," << rating << "\n";
    }
    {
        std::ofstream out(path);
        write_classifications_jsonl(records, out);
    }
    std::ofstream rout(ratings_path);
    rout << ratings.str();
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
    CHECK(run_subcommand({"frobnicate"}) == 2);
    CHECK(run_subcommand({"classify"}) == 2);  // no inputs at all
    CHECK(run_subcommand({}) == 2);
}

TEST_CASE("out-of-range knobs are usage errors") {
    TempDir dir("knobs");
    write_world(dir);
    const std::string cfg = dir.file("config.json");
    CHECK(run_subcommand({"filter", "--config", cfg, "--threshold", "1.5", "--out",
                          dir.file("o")}) == 2);
    CHECK(run_subcommand({"aggregate", "--config", cfg, "--classifications", cfg,
                          "--tau", "2", "--out", dir.file("o")}) == 2);
    CHECK(run_subcommand({"cv", "--config", cfg, "--folds", "1", "--out",
                          dir.file("o")}) == 2);
    CHECK(run_subcommand({"train", "--config", cfg, "--lambda", "-1", "--out",
                          dir.file("o")}) == 2);
}

TEST_CASE("a referenced path that does not exist is a usage error") {
    TempDir dir("missing");
    write_world(dir);
    CHECK(run_subcommand({"filter", "--config", dir.file("config.json"), "--messages",
                          dir.file("nope.jsonl"), "--out", dir.file("out")}) == 2);
    CHECK(run_subcommand({"aggregate", "--classifications", dir.file("nope.jsonl"),
                          "--out", dir.file("out")}) == 2);
}

TEST_CASE("filter: keeps only gate-passing messages and round-trips") {
    TempDir dir("filter");
    write_world(dir);
    const std::string out_dir = dir.file("out");
    REQUIRE(run_subcommand({"filter", "--config", dir.file("config.json"), "--out",
                            out_dir}) == 0);
    auto filtered = ingest_messages_file(out_dir + "/filtered.jsonl");
    CHECK(filtered.size() == 40);  // the four appended messages are irrelevant
    std::ifstream in(out_dir + "/filtered.jsonl");
    std::string line;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.at("relevance").get<double>() >= 0.3);
    }
}

TEST_CASE("template: writes the worksheet") {
    TempDir dir("template");
    write_world(dir);
    const std::string out_dir = dir.file("out");
    REQUIRE(run_subcommand({"template", "--config", dir.file("config.json"), "--out",
                            out_dir, "--per-entity", "2"}) == 0);
    std::ifstream in(out_dir + "/annotation_template.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "entity_id,message_id,relevance,text,label");
}

TEST_CASE("train / classify / aggregate / audit chain") {
    TempDir dir("chain");
    write_world(dir);
    const std::string models = dir.file("models");
    REQUIRE(run_subcommand({"train", "--config", dir.file("config.json"), "--out",
                            models}) == 0);
    auto support = load_model_file(models + "/support_model.json");
    CHECK(support.stage == Stage::Support);
    CHECK(support.meta.seed == 42);

    const std::string cls = dir.file("cls");
    REQUIRE(run_subcommand({"classify", "--config", dir.file("config.json"), "--models",
                            models, "--out", cls}) == 0);
    std::ifstream in(cls + "/classifications.jsonl");
    auto records = read_classifications_jsonl(in);
    CHECK(records.size() == 44);

    const std::string agg = dir.file("agg");
    REQUIRE(run_subcommand({"aggregate", "--config", dir.file("config.json"),
                            "--classifications", cls + "/classifications.jsonl", "--out",
                            agg}) == 0);
    std::ifstream pin(agg + "/profiles.json");
    auto profiles = read_profiles_json(pin);
    CHECK(profiles.size() == 4);

    const std::string aud = dir.file("aud");
    REQUIRE(run_subcommand({"audit", "--config", dir.file("config.json"), "--profiles",
                            agg + "/profiles.json", "--out", aud}) == 0);
    CHECK(fs::exists(aud + "/audit.json"));
    CHECK(fs::exists(aud + "/audit.txt"));
    CHECK(fs::exists(aud + "/evidence.csv"));
}

TEST_CASE("train without a seed is a usage error") {
    TempDir dir("noseed");
    write_world(dir, false);
    CHECK(run_subcommand({"train", "--config", dir.file("config_no_seed.json"), "--out",
                          dir.file("m")}) == 2);
}

TEST_CASE("cv: identical seeds produce byte-identical reports") {
    TempDir dir("cv");
    write_world(dir);
    const std::string out1 = dir.file("cv1");
    const std::string out2 = dir.file("cv2");
    REQUIRE(run_subcommand({"cv", "--config", dir.file("config.json"), "--out", out1}) ==
            0);
    REQUIRE(run_subcommand({"cv", "--config", dir.file("config.json"), "--out", out2}) ==
            0);
    CHECK(slurp(out1 + "/cv_support.json") == slurp(out2 + "/cv_support.json"));
    CHECK(slurp(out1 + "/cv_commitment.json") == slurp(out2 + "/cv_commitment.json"));

    const std::string out3 = dir.file("cv3");
    REQUIRE(run_subcommand({"cv", "--config", dir.file("config.json"), "--seed", "43",
                            "--out", out3}) == 0);
    CHECK(slurp(out1 + "/cv_support.json") != slurp(out3 + "/cv_support.json"));
}

TEST_CASE("classify: byte-identical across runs") {
    TempDir dir("det");
    write_world(dir);
    const std::string models = dir.file("models");
    REQUIRE(run_subcommand({"train", "--config", dir.file("config.json"), "--out",
                            models}) == 0);
    const std::string c1 = dir.file("c1");
    const std::string c2 = dir.file("c2");
    REQUIRE(run_subcommand({"classify", "--config", dir.file("config.json"), "--models",
                            models, "--out", c1}) == 0);
    REQUIRE(run_subcommand({"classify", "--config", dir.file("config.json"), "--models",
                            models, "--out", c2}) == 0);
    CHECK(slurp(c1 + "/classifications.jsonl") == slurp(c2 + "/classifications.jsonl"));
}

TEST_CASE("aggregate / correlate / audit over the planted 30-entity fixture") {
    TempDir dir("planted");
    write_world(dir);
    std::string planted;
    write_planted_classifications(dir.file("cls_b.jsonl"), dir.file("ratings_b.csv"),
                                  &planted);

    const std::string agg = dir.file("agg_b");
    REQUIRE(run_subcommand({"aggregate", "--config", dir.file("config.json"),
                            "--classifications", dir.file("cls_b.jsonl"), "--out",
                            agg}) == 0);

    const std::string cor = dir.file("cor_b");
    REQUIRE(run_subcommand({"correlate", "--profiles", agg + "/profiles.json",
                            "--ratings", dir.file("ratings_b.csv"), "--out", cor}) == 0);
    CHECK(fs::exists(cor + "/regression.csv"));
    CHECK(fs::exists(cor + "/scatter_non_support.csv"));
    CHECK(fs::exists(cor + "/scatter_low_commit.csv"));
    CHECK(fs::exists(cor + "/scatter_high_commit.csv"));

    const std::string aud = dir.file("aud_b");
    REQUIRE(run_subcommand({"audit", "--profiles", agg + "/profiles.json", "--ratings",
                            dir.file("ratings_b.csv"), "--out", aud}) == 0);
    auto report = nlohmann::json::parse(slurp(aud + "/audit.json"));
    const double mean = report.at("rating_mean").get<double>();
    std::set<std::string> flagged;
    for (const auto& f : report.at("flagged")) {
        flagged.insert(f.at("entity_id").get<std::string>());
        CHECK(f.at("rating").get<double>() < mean);
    }
    CHECK(flagged.count(planted) == 1);

    // determinism of the whole reporting chain
    const std::string aud2 = dir.file("aud_b2");
    REQUIRE(run_subcommand({"audit", "--profiles", agg + "/profiles.json", "--ratings",
                            dir.file("ratings_b.csv"), "--out", aud2}) == 0);
    CHECK(slurp(aud + "/audit.json") == slurp(aud2 + "/audit.json"));
    CHECK(slurp(aud + "/evidence.csv") == slurp(aud2 + "/evidence.csv"));
}

TEST_CASE("cv without pinned features runs the default preset grid") {
    TempDir dir("grid");
    write_world(dir);
    auto cfg = nlohmann::json::parse(slurp(dir.file("config.json")));
    cfg.erase("features");
    cfg.erase("lambda");
    cfg["folds"] = 2;
    {
        std::ofstream out(dir.file("config_grid.json"));
        out << cfg.dump(2) << "\n";
    }
    const std::string out_dir = dir.file("out");
    REQUIRE(run_subcommand({"cv", "--config", dir.file("config_grid.json"), "--stage",
                            "support", "--out", out_dir}) == 0);
    auto report = nlohmann::json::parse(slurp(out_dir + "/cv_support.json"));
    // 27 pruning variants for each of bow/bow+cues/best-combination, one for
    // embed, times the default 4-point lambda grid
    CHECK(report.at("grid_size").get<int>() == (27 * 3 + 1) * 4);
    CHECK(report.at("best").at("mean_f1").get<double>() > 0.9);
}

TEST_CASE("--stamp adds a timestamp header without breaking the artifact") {
    TempDir dir("stamp");
    write_world(dir);
    const std::string out_dir = dir.file("out");
    REQUIRE(run_subcommand({"sentiment-report", "--config", dir.file("config.json"),
                            "--stamp", "--out", out_dir}) == 0);
    std::ifstream in(out_dir + "/sentiment_report.csv");
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# generated_at ", 0) == 0);
}

TEST_CASE("sentiment-report: rows are normalized ratios") {
    TempDir dir("senti");
    write_world(dir);
    const std::string out_dir = dir.file("out");
    REQUIRE(run_subcommand({"sentiment-report", "--config", dir.file("config.json"),
                            "--out", out_dir}) == 0);
    std::ifstream in(out_dir + "/sentiment_report.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "label,positive,negative,neutral,messages");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 5);
        if (std::stol(fields[4]) > 0) {
            const double sum =
                std::stod(fields[1]) + std::stod(fields[2]) + std::stod(fields[3]);
            CHECK(std::fabs(sum - 1.0) <= 1e-9);
        }
        ++rows;
    }
    CHECK(rows == 4);
}
