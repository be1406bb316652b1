#pragma once

#include <cstddef>
#include <vector>

#include "sevstack/learners/common.hpp"

namespace sevstack {

struct LogisticConfig {
  double l2 = 1e-4;
  std::size_t max_iters = 500;
  double step = 0.5;

  friend bool operator==(const LogisticConfig&, const LogisticConfig&) = default;
};

/// Multinomial logistic regression: P(c | x) = softmax(W x + b)_c. With two
/// classes this is the sigmoid of (w1 - w0) x + (b1 - b0).
struct LogisticModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  DenseMatrix weights;  // classes x dim
  std::vector<double> bias;

  /// All-zero parameters (uniform predictions).
  static LogisticModel zeros(std::size_t classes, std::size_t dim);

  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

/// Mean cross-entropy plus (l2 / 2) * ||W||^2 (bias unpenalized) and its gradient.
struct LogisticObjective {
  double loss = 0.0;
  DenseMatrix grad_weights;
  std::vector<double> grad_bias;
};

LogisticObjective logistic_objective(const LogisticModel& params, const FeatureMatrix& x, Labels y, double l2);

/// Full-batch gradient descent from zero for `max_iters` fixed-size steps.
/// Throws Error(divergence) naming the iteration when the loss is not finite.
LogisticModel train_logistic(const FeatureMatrix& x, Labels y, std::size_t classes, const LogisticConfig& config = {});

DenseMatrix predict_proba(const LogisticModel& model, const FeatureMatrix& x);

}  // namespace sevstack
