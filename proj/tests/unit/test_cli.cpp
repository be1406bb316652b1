#include "doctest.h"

#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "pipeline.hpp"
#include "sevstack/error.hpp"
#include "sevstack/stacking.hpp"

using namespace sevstack;
using namespace sevstack::cli;
using sevstack::testing::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_run(const TempDir& dir, const std::string& learner, const std::string& extra = "") {
  write_file(dir / "posts.csv", testing::posts_table({"minimal", "mild", "moderate", "severe"}, 25, 3));
  const std::string ini = "[run]\nseed = 7\nout = out\n\n[data]\nname = posts\ntrain = posts.csv\nscheme = d2\n\n"
                          "[model]\nlearner = " + learner + "\n\n[params.gbm]\nn_iters = 20\n\n[params.mlp]\nepochs = 40\n" +
                          extra;
  write_file(dir / "run.ini", ini);
  return dir / "run.ini";
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("help documents every flag") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  for (const char* flag : {"--config", "--seed", "--out", "prepare", "sentiment", "featurize", "train", "predict",
                           "evaluate", "run", "experiment"}) {
    CHECK_MESSAGE(r.out.find(flag) != std::string::npos, flag);
  }
  const auto sub = invoke({"predict", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--model") != std::string::npos);
  CHECK(sub.out.find("--input") != std::string::npos);
  const auto feat = invoke({"featurize", "--help"});
  CHECK(feat.out.find("--embeddings") != std::string::npos);
  CHECK(feat.out.find("--lexicon") != std::string::npos);
}

TEST_CASE("usage errors are one machine-parsable line") {
  for (const auto& args : std::vector<std::vector<std::string>>{{}, {"bogus"}, {"train", "--nope"}, {"--seed", "x", "train"}}) {
    const auto r = invoke(args);
    CHECK(r.code != 0);
    CHECK(r.err.rfind("E_USAGE: ", 0) == 0);
    CHECK(count_lines(r.err) == 1);
  }
}

TEST_CASE("invalid config fails before any work") {
  TempDir dir("cli-invalid");
  write_run(dir, "lr", "[features]\npipeline = bert\n");
  auto r = invoke({"--config", (dir / "run.ini").string(), "run"});
  CHECK(r.code != 0);
  CHECK(r.err.rfind("E_VALIDATION: ", 0) == 0);
  CHECK(count_lines(r.err) == 1);
  CHECK_FALSE(std::filesystem::exists(dir / "out"));

  write_run(dir, "lr", "[features]\nbogus_key = 1\n");
  r = invoke({"--config", (dir / "run.ini").string(), "run"});
  CHECK(r.err.rfind("E_VALIDATION: ", 0) == 0);
  CHECK(r.err.find("bogus_key") != std::string::npos);

  write_run(dir, "nb", "[features]\nsentiment = on\n");
  r = invoke({"--config", (dir / "run.ini").string(), "run"});
  CHECK(r.err.rfind("E_VALIDATION: ", 0) == 0);

  write_run(dir, "stack", "[stack]\nbases = lr, forest\n");
  r = invoke({"--config", (dir / "run.ini").string(), "run"});
  CHECK(r.err.rfind("E_VALIDATION: ", 0) == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "out"));
}

TEST_CASE("missing input files and upstream artifacts are named") {
  TempDir dir("cli-missing");
  write_run(dir, "lr");
  std::filesystem::remove(dir / "posts.csv");
  auto r = invoke({"--config", (dir / "run.ini").string(), "prepare"});
  CHECK(r.err.rfind("E_MISSING_ARTIFACT: ", 0) == 0);
  CHECK(r.err.find("posts.csv") != std::string::npos);

  write_run(dir, "lr");
  r = invoke({"--config", (dir / "run.ini").string(), "train"});
  CHECK(r.code != 0);
  CHECK(r.err.rfind("E_MISSING_ARTIFACT: ", 0) == 0);
  CHECK(r.err.find("train.jsonl") != std::string::npos);

  write_run(dir, "lr", "[features]\nsentiment = on\n");
  REQUIRE(invoke({"--config", (dir / "run.ini").string(), "prepare"}).code == 0);
  r = invoke({"--config", (dir / "run.ini").string(), "featurize", "--lexicon", (dir / "nope.txt").string()});
  CHECK(r.err.rfind("E_MISSING_ARTIFACT: ", 0) == 0);

  r = invoke({"predict", "--model", (dir / "model.json").string(), "--input", (dir / "x.jsonl").string()});
  CHECK(r.err.rfind("E_MISSING_ARTIFACT: ", 0) == 0);
}

TEST_CASE("sentiment on a one-line corpus") {
  TempDir dir("cli-sentiment");
  write_file(dir / "one.jsonl", R"({"id": "a", "text": "I am so happy"})" "\n");
  const auto r = invoke({"sentiment", "--input", (dir / "one.jsonl").string()});
  REQUIRE(r.code == 0);
  REQUIRE(count_lines(r.out) == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["id"] == "a");
  CHECK(j["score"] == 3);
  CHECK(j["polarity"] == "positive");

  write_file(dir / "lex.txt", "happy\t-2\n");
  const auto custom = invoke({"sentiment", "--input", (dir / "one.jsonl").string(), "--lexicon", (dir / "lex.txt").string()});
  CHECK(nlohmann::json::parse(custom.out)["polarity"] == "negative");

  write_file(dir / "bad.txt", "happy\n");
  const auto bad = invoke({"sentiment", "--input", (dir / "one.jsonl").string(), "--lexicon", (dir / "bad.txt").string()});
  CHECK(bad.err.rfind("E_LEXICON: ", 0) == 0);
  const auto gone = invoke({"sentiment", "--input", (dir / "one.jsonl").string(), "--lexicon", (dir / "gone.txt").string()});
  CHECK(gone.err.rfind("E_MISSING_ARTIFACT: ", 0) == 0);
}

TEST_CASE("train twice with seed 7 gives byte-identical artifacts") {
  TempDir a("cli-det-a"), b("cli-det-b");
  for (const auto* dir : {&a, &b}) {
    write_run(*dir, "stack", "[stack]\nfolds = 3\n");
    REQUIRE(invoke({"--config", (*dir / "run.ini").string(), "run"}).code == 0);
  }
  const RunConfig c = load_run_config(a / "run.ini");
  const Layout la = layout(c);
  const Layout lb = layout(load_run_config(b / "run.ini"));
  CHECK(read_file(la.model()) == read_file(lb.model()));
  CHECK(read_file(la.report_prefix().string() + ".json") == read_file(lb.report_prefix().string() + ".json"));
  CHECK(read_file(la.report_prefix().string() + ".txt") == read_file(lb.report_prefix().string() + ".txt"));

  // rerunning one stage in place is idempotent
  const std::string before = read_file(la.model());
  REQUIRE(invoke({"--config", (a / "run.ini").string(), "train"}).code == 0);
  CHECK(read_file(la.model()) == before);
}

TEST_CASE("seed override moves artifacts to a new directory") {
  TempDir dir("cli-seed");
  write_run(dir, "lr");
  RunConfig c = load_run_config(dir / "run.ini");
  const Layout base = layout(c);
  c.seed = 8;
  const Layout other = layout(c);
  CHECK(base.corpus_dir != other.corpus_dir);
  CHECK(base.model_dir != other.model_dir);
  REQUIRE(invoke({"--config", (dir / "run.ini").string(), "--seed", "8", "run"}).code == 0);
  CHECK(std::filesystem::exists(other.model()));
  CHECK_FALSE(std::filesystem::exists(base.model()));
}

TEST_CASE("predict on training features reproduces in-memory probabilities exactly") {
  TempDir dir("cli-fidelity");
  write_run(dir, "stack", "[stack]\nfolds = 3\n[features]\nsentiment = on\n");
  REQUIRE(invoke({"--config", (dir / "run.ini").string(), "run"}).code == 0);
  const Layout paths = layout(load_run_config(dir / "run.ini"));
  const auto r = invoke({"predict", "--model", paths.model().string(), "--input", paths.train_features().string(), "--out",
                      (dir / "p.jsonl").string()});
  REQUIRE(r.code == 0);
  const RunConfig c = load_run_config(dir / "run.ini");
  const Corpus corpus = read_jsonl(paths.train_corpus(), LabelScheme::d2());
  const FeatureMatrix x = read_feature_matrix(paths.train_features());
  const auto fitted = fit_stacking(x, corpus.labels(), 4, stacking_config(c.model, training_seed(c.seed), 1));
  const DenseMatrix expected = predict_stacking(fitted, x);
  const auto got = parse_predictions(read_file(dir / "p.jsonl"));
  REQUIRE(got.size() == x.rows());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].id == x.row_ids()[i]);
    REQUIRE(got[i].proba.size() == expected.cols());
    for (std::size_t k = 0; k < expected.cols(); ++k) CHECK(got[i].proba[k] == expected(i, k));
  }
  CHECK(to_json(parse_model_artifact(read_file(paths.model()))) == read_file(paths.model()));
}

TEST_CASE("standalone evaluate matches the pipeline report") {
  TempDir dir("cli-eval");
  write_run(dir, "lr");
  REQUIRE(invoke({"--config", (dir / "run.ini").string(), "run"}).code == 0);
  const Layout paths = layout(load_run_config(dir / "run.ini"));
  const auto r = invoke({"evaluate", "--predictions", paths.predictions().string(), "--input", paths.eval_corpus().string(),
                      "--out", (dir / "rep").string()});
  REQUIRE(r.code == 0);
  const auto mine = nlohmann::json::parse(read_file(dir / "rep.json"));
  const auto theirs = nlohmann::json::parse(read_file(paths.report_prefix().string() + ".json"));
  for (const char* key : {"accuracy", "precision", "recall", "f1", "per_class", "confusion"}) {
    CHECK_MESSAGE(mine[key] == theirs[key], key);
  }
}

TEST_CASE("experiment emits the TF-IDF baseline grid in declared order") {
  TempDir dir("cli-experiment");
  write_file(dir / "d1.csv", testing::posts_table({"not depressed", "moderate", "severe"}, 20, 5));
  write_file(dir / "d2.csv", testing::posts_table({"minimal", "mild", "moderate", "severe"}, 20, 6));
  write_file(dir / "grid.ini",
             "[run]\nseed = 1\nout = out\n\n[experiment]\ndatasets = D1, D2\npipelines = tfidf\n"
             "learners = lr, nb, svm, gbm\n\n[dataset.D1]\ntrain = d1.csv\nscheme = d1\n\n"
             "[dataset.D2]\ntrain = d2.csv\nscheme = d2\n\n[params.gbm]\nn_iters = 10\n");
  const auto r = invoke({"--config", (dir / "grid.ini").string(), "experiment"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const ExperimentConfig e = load_experiment_config(dir / "grid.ini");
  CHECK(expand(e).size() == 8);

  std::vector<std::string> rows;
  std::istringstream table(r.out.substr(r.out.rfind("\nModel")));
  for (std::string line; std::getline(table, line);) {
    if (line.empty() || line.rfind("Model", 0) == 0 || line.find("---") != std::string::npos) continue;
    if (line.find('|') != std::string::npos && line.find("  A ") == std::string::npos) rows.push_back(line);
  }
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("LR (TF-IDF)", 0) == 0);
  CHECK(rows[1].rfind("NB (TF-IDF)", 0) == 0);
  CHECK(rows[2].rfind("SVM (TF-IDF)", 0) == 0);
  CHECK(rows[3].rfind("GBM (TF-IDF)", 0) == 0);
  for (const auto& row : rows) {
    std::istringstream cells(row.substr(row.find('|') + 1));
    std::size_t numbers = 0;
    for (std::string tok; cells >> tok;) {
      if (tok != "|") ++numbers;
    }
    CHECK(numbers == 8);
  }

  const auto again = invoke({"--config", (dir / "grid.ini").string(), "experiment"});
  CHECK(again.out == r.out);
}
