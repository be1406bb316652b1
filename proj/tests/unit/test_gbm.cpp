#include "doctest.h"

#include "fixtures.hpp"
#include "sevstack/learners/gbm.hpp"
#include "sevstack/random.hpp"

using namespace sevstack;

namespace {

testing::Dataset xor_data() {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> y;
  Rng rng(31);
  for (int i = 0; i < 120; ++i) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    rows.push_back({a, b});
    y.push_back((a > 0) != (b > 0) ? 1 : 0);
  }
  return {FeatureMatrix::from_rows(rows), y};
}

}  // namespace

TEST_CASE("squared-loss pseudo-residual") {
  CHECK(squared_loss_pseudo_residual(1.0, 0.3) == doctest::Approx(0.7).epsilon(1e-15));
  static_assert(squared_loss_pseudo_residual(2.0, 2.0) == 0.0);
}

TEST_CASE("eta = 0 predicts the priors") {
  const auto data = testing::gaussian_blobs(10, 3, 1.0, 1);
  std::vector<std::size_t> y = data.y;
  y[0] = 1;
  const auto m = train_gbm(data.x, y, 3, {.eta = 0.0, .n_iters = 5});
  const auto priors = class_priors(y, 3);
  const auto p = predict_proba(m, data.x);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(p(r, c) == doctest::Approx(priors[c]).epsilon(1e-12));
  }
}

TEST_CASE("two-blob deviance drops below the initial deviance") {
  const auto data = testing::gaussian_blobs(50, 2, 1.0, 7);
  std::vector<double> trace;
  train_gbm(data.x, data.y, 2, {.eta = 0.1, .n_iters = 50, .max_depth = 3}, &trace);
  REQUIRE(trace.size() == 51);
  CHECK(trace.back() < trace.front());
}

TEST_CASE("training deviance is non-increasing at eta 0.1") {
  for (const auto& data : {testing::gaussian_blobs(50, 3, 1.2, 3), xor_data()}) {
    std::vector<double> trace;
    const std::size_t classes = data.y.size() == 120 ? 2 : 3;
    train_gbm(data.x, data.y, classes, {.eta = 0.1, .n_iters = 100}, &trace);
    for (std::size_t t = 1; t < trace.size(); ++t) CHECK(trace[t] <= trace[t - 1] + 1e-9);
  }
}

TEST_CASE("fits xor and stays row-stochastic") {
  const auto data = xor_data();
  const auto m = train_gbm(data.x, data.y, 2);
  const auto p = predict_proba(m, data.x);
  for (std::size_t r = 0; r < p.rows(); ++r) CHECK(p(r, 0) + p(r, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(testing::accuracy(data.y, argmax_rows(p)) > 0.95);
  CHECK(m.iterations() == 100);
  CHECK(m.trees.size() == 200);
}
