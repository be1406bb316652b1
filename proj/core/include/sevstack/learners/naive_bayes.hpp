#pragma once

#include <cstddef>
#include <vector>

#include "sevstack/learners/common.hpp"

namespace sevstack {

struct NaiveBayesConfig {
  double alpha = 1.0;

  friend bool operator==(const NaiveBayesConfig&, const NaiveBayesConfig&) = default;
};

/// Multinomial naive Bayes over nonnegative feature weights with Laplace
/// smoothing: theta_cj = (sum_{i in c} x_ij + alpha) / (sum_{i in c, j} x_ij + alpha D).
struct NaiveBayesModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  double alpha = 1.0;
  std::vector<double> log_prior;
  DenseMatrix log_likelihood;  // classes x dim

  friend bool operator==(const NaiveBayesModel&, const NaiveBayesModel&) = default;
};

/// Throws Error(contract) on a negative feature value.
NaiveBayesModel train_naive_bayes(const FeatureMatrix& x, Labels y, std::size_t classes,
                                  const NaiveBayesConfig& config = {});

DenseMatrix predict_proba(const NaiveBayesModel& model, const FeatureMatrix& x);

}  // namespace sevstack
