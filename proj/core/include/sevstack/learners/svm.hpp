#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sevstack/learners/common.hpp"

namespace sevstack {

struct SvmConfig {
  double lambda = 1e-4;
  std::size_t epochs = 20;

  friend bool operator==(const SvmConfig&, const SvmConfig&) = default;
};

/// One-vs-rest linear hinge-loss classifiers; probabilities are the softmax
/// of the per-class margins.
struct SvmModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  double lambda = 1e-4;
  DenseMatrix weights;  // classes x dim
  std::vector<double> bias;

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

/// Primal objective lambda/2 ||w||^2 + mean hinge for class `c` vs rest.
double svm_objective(const SvmModel& model, const FeatureMatrix& x, Labels y, std::size_t c);

/// Stochastic subgradient descent (Pegasos-style, step 1 / (lambda (t0 + t))
/// with t0 = 1 / lambda, projection onto ||w|| <= 1 / sqrt(lambda)).
SvmModel train_svm(const FeatureMatrix& x, Labels y, std::size_t classes, const SvmConfig& config = {},
                   std::uint64_t seed = 0);

DenseMatrix decision_scores(const SvmModel& model, const FeatureMatrix& x);
DenseMatrix predict_proba(const SvmModel& model, const FeatureMatrix& x);

}  // namespace sevstack
