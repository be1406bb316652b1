#include "sevstack/learners/logistic.hpp"

#include <cmath>

#include "sevstack/error.hpp"

namespace sevstack {

LogisticModel LogisticModel::zeros(std::size_t classes, std::size_t dim) {
  return LogisticModel{classes, dim, DenseMatrix(classes, dim), std::vector<double>(classes, 0.0)};
}

namespace {

void scores_into(const LogisticModel& m, const RowView& row, std::span<double> out) {
  for (std::size_t c = 0; c < m.classes; ++c) out[c] = row.dot(m.weights.row(c)) + m.bias[c];
}

}  // namespace

LogisticObjective logistic_objective(const LogisticModel& params, const FeatureMatrix& x, Labels y, double l2) {
  check_feature_dim(params.dim, x.dim(), "logistic");
  const std::size_t c_count = params.classes;
  LogisticObjective obj{0.0, DenseMatrix(c_count, params.dim), std::vector<double>(c_count, 0.0)};
  std::vector<double> p(c_count);
  const double inv_n = x.rows() > 0 ? 1.0 / static_cast<double>(x.rows()) : 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const RowView row = x.row(r);
    scores_into(params, row, p);
    // log-sum-exp for the loss, then normalize in place for the gradient
    double m = p[0];
    for (double v : p) m = std::max(m, v);
    double z = 0.0;
    for (double v : p) z += std::exp(v - m);
    obj.loss -= (p[y[r]] - m - std::log(z)) * inv_n;
    softmax_inplace(p);
    for (std::size_t c = 0; c < c_count; ++c) {
      const double residual = (p[c] - (y[r] == c ? 1.0 : 0.0)) * inv_n;
      row.axpy(residual, obj.grad_weights.row(c));
      obj.grad_bias[c] += residual;
    }
  }
  double penalty = 0.0;
  for (std::size_t i = 0; i < params.weights.data().size(); ++i) {
    const double wv = params.weights.data()[i];
    penalty += wv * wv;
    obj.grad_weights.data()[i] += l2 * wv;
  }
  obj.loss += 0.5 * l2 * penalty;
  return obj;
}

LogisticModel train_logistic(const FeatureMatrix& x, Labels y, std::size_t classes, const LogisticConfig& config) {
  check_training_inputs(x, y, classes, "logistic");
  if (config.l2 < 0.0 || !(config.step > 0.0)) {
    throw Error(ErrorCode::validation, "logistic: need l2 >= 0 and step > 0");
  }
  LogisticModel model = LogisticModel::zeros(classes, x.dim());
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    const LogisticObjective obj = logistic_objective(model, x, y, config.l2);
    if (!std::isfinite(obj.loss)) {
      throw Error(ErrorCode::divergence, "logistic: non-finite loss at iteration " + std::to_string(it));
    }
    for (std::size_t i = 0; i < model.weights.data().size(); ++i) {
      model.weights.data()[i] -= config.step * obj.grad_weights.data()[i];
    }
    for (std::size_t c = 0; c < classes; ++c) model.bias[c] -= config.step * obj.grad_bias[c];
  }
  return model;
}

DenseMatrix predict_proba(const LogisticModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "logistic");
  DenseMatrix out(x.rows(), model.classes);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    scores_into(model, x.row(r), out.row(r));
    softmax_inplace(out.row(r));
  }
  return out;
}

}  // namespace sevstack
