#include "sevstack/learners/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sevstack/error.hpp"

namespace sevstack {

double samme_alpha(double error, std::size_t classes) noexcept {
  return std::log((1.0 - error) / error) + std::log(static_cast<double>(classes) - 1.0);
}

double binary_alpha(double error) noexcept { return 0.5 * std::log((1.0 - error) / error); }

namespace {

DecisionTree fit_weighted_classifier(const BinnedFeatures& bins, Labels y, std::span<const double> weights,
                                     std::size_t classes, std::size_t depth) {
  const std::size_t w = classes + 1;
  std::vector<double> stats(y.size() * w, 0.0);
  for (std::size_t r = 0; r < y.size(); ++r) {
    stats[r * w + y[r]] = weights[r];
    stats[r * w + classes] = 1.0;
  }
  TreeGrowth g;
  g.max_depth = depth;
  g.min_leaf = 1;
  g.width = w;
  // Correctly classified weight under a majority leaf.
  g.score = [classes](std::span<const double> s) { return *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(classes)); };
  g.leaf_value = [classes](std::span<const double> s) { return static_cast<double>(argmax(s.first(classes))); };
  return grow_tree(bins, stats, g);
}

}  // namespace

AdaBoostModel train_adaboost(const FeatureMatrix& x, Labels y, std::size_t classes, const AdaBoostConfig& config,
                             std::vector<AdaBoostRound>* trace) {
  check_training_inputs(x, y, classes, "adaboost");
  if (config.stump_depth < 1) throw Error(ErrorCode::validation, "adaboost: stump_depth must be >= 1");

  AdaBoostModel model;
  model.classes = classes;
  model.dim = x.dim();
  model.priors = class_priors(y, classes);
  if (trace) trace->clear();
  if (classes < 2) return model;

  const std::size_t n = x.rows();
  const BinnedFeatures bins(x, config.max_bins);
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<char> miss(n);
  const double give_up = static_cast<double>(classes - 1) / static_cast<double>(classes);

  for (std::size_t t = 0; t < config.rounds; ++t) {
    DecisionTree h = fit_weighted_classifier(bins, y, weights, classes, config.stump_depth);
    double err = 0.0, total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      miss[r] = static_cast<std::size_t>(h.predict(x.row(r))) != y[r];
      total += weights[r];
      if (miss[r]) err += weights[r];
    }
    err /= total;
    if (err >= give_up) {
      if (trace) trace->push_back({err, 0.0, false, std::accumulate(weights.begin(), weights.end(), 0.0), weights});
      break;
    }
    const bool perfect = err <= 1e-10;
    const double alpha = samme_alpha(std::max(err, 1e-10), classes);
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (miss[r]) weights[r] *= std::exp(alpha);
      sum += weights[r];
    }
    for (double& v : weights) v /= sum;
    model.weak_classifiers.push_back(std::move(h));
    model.alphas.push_back(alpha);
    if (trace) trace->push_back({err, alpha, true, std::accumulate(weights.begin(), weights.end(), 0.0), weights});
    if (perfect) break;
  }
  return model;
}

DenseMatrix predict_proba(const AdaBoostModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "adaboost");
  DenseMatrix out(x.rows(), model.classes);
  const double alpha_sum = std::accumulate(model.alphas.begin(), model.alphas.end(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = out.row(r);
    if (model.alphas.empty()) {
      std::copy(model.priors.begin(), model.priors.end(), row.begin());
      continue;
    }
    const RowView features = x.row(r);
    for (std::size_t t = 0; t < model.alphas.size(); ++t) {
      row[static_cast<std::size_t>(model.weak_classifiers[t].predict(features))] += model.alphas[t];
    }
    for (double& v : row) v /= alpha_sum;
  }
  return out;
}

}  // namespace sevstack
