#include "sevstack/learners/naive_bayes.hpp"

#include <cmath>

#include "sevstack/error.hpp"

namespace sevstack {

NaiveBayesModel train_naive_bayes(const FeatureMatrix& x, Labels y, std::size_t classes,
                                  const NaiveBayesConfig& config) {
  check_training_inputs(x, y, classes, "naive_bayes");
  if (!(config.alpha > 0.0)) throw Error(ErrorCode::validation, "naive_bayes: alpha must be > 0");
  const std::size_t d = x.dim();
  DenseMatrix counts(classes, d);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.row(r).for_each_nonzero([&](std::size_t j, double v) {
      if (v < 0.0) {
        throw Error(ErrorCode::contract, "naive_bayes: negative feature value at row " + std::to_string(r) +
                                             ", column " + std::to_string(j));
      }
      counts(y[r], j) += v;
    });
  }
  NaiveBayesModel m{classes, d, config.alpha, {}, DenseMatrix(classes, d)};
  for (double p : class_priors(y, classes)) m.log_prior.push_back(std::log(p));
  for (std::size_t c = 0; c < classes; ++c) {
    double total = 0.0;
    for (double v : counts.row(c)) total += v;
    const double denom = std::log(total + config.alpha * static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) m.log_likelihood(c, j) = std::log(counts(c, j) + config.alpha) - denom;
  }
  return m;
}

DenseMatrix predict_proba(const NaiveBayesModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "naive_bayes");
  DenseMatrix out(x.rows(), model.classes);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const RowView row = x.row(r);
    for (std::size_t c = 0; c < model.classes; ++c) {
      out(r, c) = model.log_prior[c] + row.dot(model.log_likelihood.row(c));
    }
    softmax_inplace(out.row(r));
  }
  return out;
}

}  // namespace sevstack
