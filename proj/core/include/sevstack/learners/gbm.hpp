#pragma once

#include <cstddef>
#include <vector>

#include "sevstack/learners/common.hpp"
#include "sevstack/learners/tree.hpp"

namespace sevstack {

struct GbmConfig {
  double eta = 0.1;
  std::size_t n_iters = 100;
  std::size_t max_depth = 3;
  std::size_t min_leaf = 2;
  std::size_t max_bins = 255;

  friend bool operator==(const GbmConfig&, const GbmConfig&) = default;
};

/// Multinomial-deviance gradient boosting. Scores start at the per-class log
/// prior; iteration t adds eta * h_{t,k}(x) to class k, where h_{t,k} is a
/// regression tree fitted to the pseudo-residuals onehot(y)_k - p_k.
struct GbmModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  double eta = 0.1;
  std::size_t max_depth = 3;
  std::size_t min_leaf = 2;
  std::vector<double> init_scores;
  std::vector<RegressionTree> trees;  // iteration-major: trees[t * classes + k]

  std::size_t iterations() const noexcept { return classes == 0 ? 0 : trees.size() / classes; }

  friend bool operator==(const GbmModel&, const GbmModel&) = default;
};

/// Negative gradient of (y - f)^2 / 2 with respect to f.
constexpr double squared_loss_pseudo_residual(double y, double f) noexcept { return y - f; }

/// Mean multinomial deviance (negative log-likelihood) of raw class scores.
double multinomial_deviance(const DenseMatrix& scores, Labels y);

/// `deviance_trace`, when given, receives the training deviance before the
/// first iteration and after each one (n_iters + 1 values).
GbmModel train_gbm(const FeatureMatrix& x, Labels y, std::size_t classes, const GbmConfig& config = {},
                   std::vector<double>* deviance_trace = nullptr);

/// Raw additive scores F(x) before the softmax.
DenseMatrix decision_scores(const GbmModel& model, const FeatureMatrix& x);
DenseMatrix predict_proba(const GbmModel& model, const FeatureMatrix& x);

}  // namespace sevstack
