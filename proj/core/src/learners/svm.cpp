#include "sevstack/learners/svm.hpp"

#include <cmath>
#include <numeric>

#include "sevstack/error.hpp"
#include "sevstack/random.hpp"

namespace sevstack {

double svm_objective(const SvmModel& model, const FeatureMatrix& x, Labels y, std::size_t c) {
  double reg = 0.0;
  for (double v : model.weights.row(c)) reg += v * v;
  double hinge = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double yi = y[r] == c ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - yi * (x.row(r).dot(model.weights.row(c)) + model.bias[c]));
  }
  return 0.5 * model.lambda * reg + (x.rows() ? hinge / static_cast<double>(x.rows()) : 0.0);
}

SvmModel train_svm(const FeatureMatrix& x, Labels y, std::size_t classes, const SvmConfig& config,
                   std::uint64_t seed) {
  check_training_inputs(x, y, classes, "svm");
  if (!(config.lambda > 0.0)) throw Error(ErrorCode::validation, "svm: lambda must be > 0");
  const std::size_t n = x.rows();
  const std::size_t d = x.dim();
  SvmModel m{classes, d, config.lambda, DenseMatrix(classes, d), std::vector<double>(classes, 0.0)};
  const double radius = 1.0 / std::sqrt(config.lambda);
  const double t0 = 1.0 / config.lambda;
  const Rng root(seed);
  std::vector<std::size_t> order(n);
  std::vector<double> sq_norm(n);
  for (std::size_t r = 0; r < n; ++r) sq_norm[r] = x.row(r).squared_norm();

  for (std::size_t c = 0; c < classes; ++c) {
    // w = scale * v keeps the shrink step O(1) on sparse rows.
    std::vector<double> v(d, 0.0);
    double scale = 1.0, v_norm2 = 0.0, b = 0.0, t = 0.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      Rng rng = root.fork({c, epoch});
      rng.shuffle(order);
      for (std::size_t r : order) {
        t += 1.0;
        const double eta = 1.0 / (config.lambda * (t0 + t));
        const RowView row = x.row(r);
        const double yi = y[r] == c ? 1.0 : -1.0;
        const double vx = row.dot(v);
        const double margin = yi * (scale * vx + b);
        scale *= 1.0 - eta * config.lambda;
        if (margin < 1.0) {
          const double a = eta * yi / scale;
          v_norm2 += 2.0 * a * vx + a * a * sq_norm[r];
          row.axpy(a, v);
          b += eta * yi;
        }
        const double w_norm = scale * std::sqrt(std::max(v_norm2, 0.0));
        if (w_norm > radius) scale *= radius / w_norm;
        if (scale < 1e-9) {
          v_norm2 = 0.0;
          for (double& e : v) {
            e *= scale;
            v_norm2 += e * e;
          }
          scale = 1.0;
        }
      }
      if (!std::isfinite(scale) || !std::isfinite(b) || !std::isfinite(v_norm2)) {
        throw Error(ErrorCode::divergence, "svm: non-finite parameters for class " + std::to_string(c) +
                                               " in epoch " + std::to_string(epoch));
      }
    }
    auto w = m.weights.row(c);
    for (std::size_t j = 0; j < d; ++j) w[j] = scale * v[j];
    m.bias[c] = b;
  }
  return m;
}

DenseMatrix decision_scores(const SvmModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "svm");
  DenseMatrix out(x.rows(), model.classes);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const RowView row = x.row(r);
    for (std::size_t c = 0; c < model.classes; ++c) out(r, c) = row.dot(model.weights.row(c)) + model.bias[c];
  }
  return out;
}

DenseMatrix predict_proba(const SvmModel& model, const FeatureMatrix& x) {
  DenseMatrix out = decision_scores(model, x);
  for (std::size_t r = 0; r < out.rows(); ++r) softmax_inplace(out.row(r));
  return out;
}

}  // namespace sevstack
