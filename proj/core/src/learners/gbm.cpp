#include "sevstack/learners/gbm.hpp"

#include <algorithm>
#include <cmath>

#include "sevstack/error.hpp"

namespace sevstack {

double multinomial_deviance(const DenseMatrix& scores, Labels y) {
  double total = 0.0;
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto row = scores.row(r);
    const double m = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - m);
    total += m + std::log(z) - row[y[r]];
  }
  return scores.rows() == 0 ? 0.0 : total / static_cast<double>(scores.rows());
}

GbmModel train_gbm(const FeatureMatrix& x, Labels y, std::size_t classes, const GbmConfig& config,
                   std::vector<double>* deviance_trace) {
  check_training_inputs(x, y, classes, "gbm");
  if (!(config.eta >= 0.0 && config.eta <= 1.0)) throw Error(ErrorCode::validation, "gbm: eta must lie in [0, 1]");
  if (config.max_depth < 1) throw Error(ErrorCode::validation, "gbm: max_depth must be >= 1");

  GbmModel model;
  model.classes = classes;
  model.dim = x.dim();
  model.eta = config.eta;
  model.max_depth = config.max_depth;
  model.min_leaf = config.min_leaf;
  for (double p : class_priors(y, classes)) model.init_scores.push_back(std::log(p));

  const std::size_t n = x.rows();
  DenseMatrix scores(n, classes);
  for (std::size_t r = 0; r < n; ++r) std::copy(model.init_scores.begin(), model.init_scores.end(), scores.row(r).begin());
  if (deviance_trace) {
    deviance_trace->clear();
    deviance_trace->push_back(multinomial_deviance(scores, y));
  }

  const BinnedFeatures bins(x, config.max_bins);
  DenseMatrix proba(n, classes);
  std::vector<double> residual(n);
  std::vector<RegressionTree> round(classes);
  for (std::size_t t = 0; t < config.n_iters; ++t) {
    for (std::size_t r = 0; r < n; ++r) {
      std::copy(scores.row(r).begin(), scores.row(r).end(), proba.row(r).begin());
      softmax_inplace(proba.row(r));
    }
    for (std::size_t k = 0; k < classes; ++k) {
      for (std::size_t r = 0; r < n; ++r) residual[r] = (y[r] == k ? 1.0 : 0.0) - proba(r, k);
      round[k] = fit_regression_tree(bins, residual, config.max_depth, config.min_leaf);
    }
    for (std::size_t k = 0; k < classes; ++k) {
      for (std::size_t r = 0; r < n; ++r) scores(r, k) += config.eta * round[k].predict(x.row(r));
      model.trees.push_back(round[k]);
    }
    const double dev = multinomial_deviance(scores, y);
    if (!std::isfinite(dev)) throw Error(ErrorCode::divergence, "gbm: non-finite deviance at iteration " + std::to_string(t));
    if (deviance_trace) deviance_trace->push_back(dev);
  }
  return model;
}

DenseMatrix decision_scores(const GbmModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "gbm");
  DenseMatrix out(x.rows(), model.classes);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const RowView row = x.row(r);
    for (std::size_t k = 0; k < model.classes; ++k) {
      double f = model.init_scores[k];
      for (std::size_t t = 0; t < model.iterations(); ++t) f += model.eta * model.trees[t * model.classes + k].predict(row);
      out(r, k) = f;
    }
  }
  return out;
}

DenseMatrix predict_proba(const GbmModel& model, const FeatureMatrix& x) {
  DenseMatrix out = decision_scores(model, x);
  for (std::size_t r = 0; r < out.rows(); ++r) softmax_inplace(out.row(r));
  return out;
}

}  // namespace sevstack
