#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sevstack/corpus.hpp"
#include "sevstack/stacking.hpp"

namespace sevstack::cli {

struct DataConfig {
  std::string name = "data";
  std::filesystem::path train;
  std::optional<std::filesystem::path> test;  // evaluation file; split from train when absent
  SplitTag eval_tag = SplitTag::test;
  double split = 0.7;
  std::string scheme = "d2";
  ColumnMapping columns;
  char delimiter = ',';
  bool dedup = true;
  std::optional<std::filesystem::path> embeddings;
};

enum class Pipeline { tfidf, embeddings };

struct FeatureConfig {
  Pipeline pipeline = Pipeline::tfidf;
  bool sentiment = false;
  std::optional<std::filesystem::path> lexicon;  // bundled AFINN-111 when absent
  std::size_t min_df = 1;
};

using ParamMap = std::map<std::string, std::string>;

struct ModelConfig {
  std::string learner = "lr";  // a learner name or "stack"
  std::map<std::string, ParamMap> params;  // keyed by learner short name
  std::vector<std::string> bases{"lr", "gbm", "adaboost", "mlp"};
  std::string meta = "lr";
  std::size_t folds = 5;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out = "sevstack-out";
  std::size_t threads = 0;
  DataConfig data;
  FeatureConfig features;
  ModelConfig model;
};

struct ExperimentConfig {
  RunConfig run;  // seed, out, threads, model params
  std::vector<DataConfig> datasets;
  std::vector<Pipeline> pipelines;
  std::vector<std::string> learners;
  std::vector<bool> sentiment;
};

/// Single-run file: [run], [data], [features], [model], [stack], [params.<learner>].
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Grid file: [run], [experiment], [dataset.<name>]..., [params.<learner>].
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Throws Error(validation) on bad selectors and Error(missing_artifact) for
/// missing input files. Runs before any work.
void validate(const RunConfig& config);

LearnerSpec learner_spec(const ModelConfig& model, const std::string& name);
StackingConfig stacking_config(const ModelConfig& model, std::uint64_t seed, std::size_t threads);

std::string_view to_string(Pipeline p) noexcept;

/// Canonical `key=value` text of each stage's inputs; directory names hash these.
std::string canonical(const DataConfig& d, std::uint64_t seed);
std::string canonical(const FeatureConfig& f);
std::string canonical(const ModelConfig& m, std::uint64_t seed);

}  // namespace sevstack::cli
