#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "config.hpp"
#include "sevstack/evaluation.hpp"
#include "sevstack/sentiment.hpp"
#include "sevstack/stacking.hpp"

namespace sevstack::cli {

/// Artifact locations of one run under the output root. Each directory name
/// carries a hash of the configuration that produced it.
struct Layout {
  std::filesystem::path corpus_dir;
  std::filesystem::path features_dir;
  std::filesystem::path model_dir;
  std::filesystem::path report_dir;

  std::filesystem::path train_corpus() const { return corpus_dir / "train.jsonl"; }
  std::filesystem::path eval_corpus() const { return corpus_dir / "eval.jsonl"; }
  std::filesystem::path train_features() const { return features_dir / "train.jsonl"; }
  std::filesystem::path eval_features() const { return features_dir / "eval.jsonl"; }
  std::filesystem::path vocabulary() const { return features_dir / "vocabulary.json"; }
  std::filesystem::path model() const { return model_dir / "model.json"; }
  std::filesystem::path predictions() const { return report_dir / "predictions.jsonl"; }
  std::filesystem::path report_prefix() const { return report_dir / "report"; }
};

Layout layout(const RunConfig& config);

std::uint64_t split_seed(std::uint64_t seed);
std::uint64_t training_seed(std::uint64_t seed);

std::string model_display_name(const ModelConfig& model);
std::string feature_display_name(const FeatureConfig& features);

/// Trained classifier plus the class names it predicts.
struct ModelArtifact {
  std::vector<std::string> classes;
  std::string name;
  std::variant<LearnerModel, StackingModel> model;
};

std::string to_json(const ModelArtifact& artifact);
ModelArtifact parse_model_artifact(std::string_view json, std::string_view source = "<memory>");
ModelArtifact read_model_artifact(const std::filesystem::path& path);
DenseMatrix predict_proba(const ModelArtifact& artifact, const FeatureMatrix& x);

struct Prediction {
  std::string id;
  std::string label;
  std::vector<double> proba;
};

/// JSON Lines `{"id", "label", "proba"}`; probabilities round-trip exactly.
std::string predictions_jsonl(const FeatureMatrix& x, const DenseMatrix& proba, const std::vector<std::string>& classes);
std::vector<Prediction> parse_predictions(std::string_view content, std::string_view source = "<memory>");

/// Reads the `id`/`text` fields of a JSON Lines corpus or a delimited table.
std::vector<Document> read_documents(const std::filesystem::path& path, const ColumnMapping& columns, char delimiter);
std::string sentiment_jsonl(const std::vector<Document>& docs, const Lexicon& lexicon);

/// Pipeline stages. Every stage rewrites its artifacts from its inputs and
/// raises Error(missing_artifact) naming an absent upstream file.
void stage_prepare(const RunConfig& config, const Layout& paths, std::ostream& log);
void stage_featurize(const RunConfig& config, const Layout& paths, std::ostream& log);
void stage_train(const RunConfig& config, const Layout& paths, std::ostream& log);
void stage_predict(const RunConfig& config, const Layout& paths, std::ostream& log);
EvalReport stage_evaluate(const RunConfig& config, const Layout& paths, std::ostream& log);

EvalReport evaluate_predictions(const Corpus& gold, const std::vector<Prediction>& predictions, RunMetadata run);

Lexicon load_configured_lexicon(const std::optional<std::filesystem::path>& path);

}  // namespace sevstack::cli

namespace sevstack::cli {

/// One grid cell of an experiment, in declared order.
struct ExperimentCell {
  RunConfig config;
  Layout paths;
};

std::vector<ExperimentCell> expand(const ExperimentConfig& experiment);

struct ExperimentResult {
  std::vector<EvalReport> reports;
  std::filesystem::path table;
  std::filesystem::path json;
};

/// Prepares each dataset and feature set once, runs the cells (concurrently
/// when threads allow) and writes one combined table in grid order.
ExperimentResult run_experiment(const ExperimentConfig& experiment, std::ostream& log);

}  // namespace sevstack::cli
