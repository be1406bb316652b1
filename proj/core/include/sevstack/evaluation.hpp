#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sevstack/corpus.hpp"

namespace sevstack {

/// C x C counts; rows are gold classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes = 0) : classes_(classes), counts_(classes * classes, 0) {}

  std::size_t classes() const noexcept { return classes_; }
  std::size_t at(std::size_t gold, std::size_t pred) const { return counts_.at(gold * classes_ + pred); }
  void add(std::size_t gold, std::size_t pred) { ++counts_.at(gold * classes_ + pred); }
  std::size_t total() const noexcept;
  std::size_t support(std::size_t gold) const;
  std::size_t predicted(std::size_t pred) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

/// Throws Error(contract) on a length mismatch or an index >= classes.
ConfusionMatrix confusion(std::span<const std::size_t> gold, std::span<const std::size_t> pred, std::size_t classes);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
  bool precision_undefined = false;  // no predictions of this class; reported as 0
  bool recall_undefined = false;     // no gold members of this class; reported as 0
};

struct Metrics {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::vector<ClassMetrics> per_class;
};

/// Support-weighted P/R/F1 and accuracy. Throws Error(contract) when total is 0.
Metrics weighted_metrics(const ConfusionMatrix& cm);

struct RunMetadata {
  std::string dataset;
  std::string features;
  std::string model;
  std::uint64_t seed = 0;
};

struct EvalReport {
  RunMetadata run;
  std::vector<std::string> class_names;
  Metrics metrics;
  ConfusionMatrix matrix;
};

/// Throws Error(contract) when the corpus lacks gold labels or sizes differ.
EvalReport make_report(const Corpus& gold, std::span<const std::size_t> predictions, RunMetadata run);

/// Full-precision JSON document.
std::string report_json(const EvalReport& report);

/// Fixed-width table: one row per run, A P R F per dataset with 2 decimals.
/// Runs with the same model and features share a row; datasets become column groups.
std::string render_table(std::span<const EvalReport> reports);

/// Per-class breakdown and confusion matrix for one run.
std::string render_detail(const EvalReport& report);

/// Writes `<prefix>.json` and `<prefix>.txt`.
void write_report(const EvalReport& report, const std::filesystem::path& prefix);

}  // namespace sevstack
