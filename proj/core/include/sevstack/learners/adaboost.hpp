#pragma once

#include <cstddef>
#include <vector>

#include "sevstack/learners/common.hpp"
#include "sevstack/learners/tree.hpp"

namespace sevstack {

struct AdaBoostConfig {
  std::size_t rounds = 50;
  std::size_t stump_depth = 1;
  std::size_t max_bins = 255;

  friend bool operator==(const AdaBoostConfig&, const AdaBoostConfig&) = default;
};

/// SAMME boosting. Each weak classifier is a DecisionTree whose leaves hold
/// class indices; H(x) = argmax_c sum_t alpha_t * I(h_t(x) = c).
struct AdaBoostModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<DecisionTree> weak_classifiers;
  std::vector<double> alphas;
  std::vector<double> priors;  // fallback when no round was kept

  friend bool operator==(const AdaBoostModel&, const AdaBoostModel&) = default;
};

/// Per-round diagnostics.
struct AdaBoostRound {
  double error = 0.0;       // weighted error of h_t before the update
  double alpha = 0.0;
  bool kept = false;        // false for the final discarded round
  double weight_sum = 0.0;  // sum of the normalized weights after the update
  std::vector<double> weights;
};

/// ln((1 - eps) / eps) + ln(C - 1)
double samme_alpha(double error, std::size_t classes) noexcept;
/// 1/2 ln((1 - eps) / eps), the two-class rule with labels in {-1, +1}.
double binary_alpha(double error) noexcept;

/// Rounds whose weighted error reaches (C - 1) / C are discarded and stop
/// training. A weak learner with zero error is kept (its error clamped to
/// 1e-10 for alpha) and ends training.
AdaBoostModel train_adaboost(const FeatureMatrix& x, Labels y, std::size_t classes, const AdaBoostConfig& config = {},
                             std::vector<AdaBoostRound>* trace = nullptr);

/// Vote shares sum_t alpha_t I(h_t(x) = c) / sum_t alpha_t; class priors when
/// the model has no rounds.
DenseMatrix predict_proba(const AdaBoostModel& model, const FeatureMatrix& x);

}  // namespace sevstack
