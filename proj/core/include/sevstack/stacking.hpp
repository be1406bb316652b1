#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sevstack/learners/learner.hpp"

namespace sevstack {

struct StackingConfig {
  std::vector<LearnerSpec> bases;
  LearnerSpec meta = LearnerSpec::defaults(LearnerKind::logistic);
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency; never affects results

  /// Bases LR, GBM, AdaBoost, MLP; meta LR; K = 5.
  static StackingConfig defaults(std::uint64_t seed = 0);

  /// Throws Error(validation) unless folds >= 2 and bases is non-empty.
  void validate() const;

  friend bool operator==(const StackingConfig& a, const StackingConfig& b) {
    return a.bases == b.bases && a.meta == b.meta && a.folds == b.folds && a.seed == b.seed;
  }
};

/// Trained stack: base models refit on the full training set and a meta
/// classifier over their concatenated class probabilities.
struct StackingModel {
  StackingConfig config;
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<LearnerModel> bases;
  LearnerModel meta;
};

/// Stratified K-fold assignment: members of each class are shuffled from
/// `seed` and dealt round-robin, continuing across classes.
std::vector<std::size_t> stratified_folds(Labels y, std::size_t classes, std::size_t folds, std::uint64_t seed);

/// Seed used for base `index` on fold `fold` (fold == folds means the full refit).
std::uint64_t base_seed(const StackingConfig& config, std::size_t index, std::size_t fold);

struct OofResult {
  DenseMatrix matrix;  // N x (B * C)
  std::vector<std::size_t> fold_of;
};

/// Out-of-fold base predictions. Throws Error(fold) when a class has fewer
/// than K members.
OofResult build_oof_matrix(const FeatureMatrix& x, Labels y, std::size_t classes, const StackingConfig& config);

StackingModel fit_stacking(const FeatureMatrix& x, Labels y, std::size_t classes, const StackingConfig& config);

/// Base probabilities side by side, N x (B * C), rows named like `x`.
FeatureMatrix stack_base_outputs(const StackingModel& model, const FeatureMatrix& x);

/// meta(concat(base_1(x), ..., base_B(x))).
DenseMatrix predict_stacking(const StackingModel& model, const FeatureMatrix& x);

std::string to_json(const StackingModel& model);
StackingModel stacking_from_json(std::string_view json);

}  // namespace sevstack
