#include "doctest.h"

#include "fixtures.hpp"
#include "sevstack/learners/svm.hpp"

using namespace sevstack;

TEST_CASE("separable 1-D data is fit exactly") {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> y;
  for (int i = 1; i <= 15; ++i) {
    rows.push_back({-0.2 * i});
    y.push_back(0);
    rows.push_back({0.2 * i});
    y.push_back(1);
  }
  const auto x = FeatureMatrix::from_rows(rows);
  const auto m = train_svm(x, y, 2, {.lambda = 1e-4}, 1);
  CHECK(argmax_rows(predict_proba(m, x)) == y);
}

TEST_CASE("all-identical labels") {
  const auto data = testing::random_problem(8, 3, 1, 2);
  const auto m = train_svm(data.x, data.y, 1);
  for (auto c : argmax_rows(predict_proba(m, data.x))) CHECK(c == 0);
}

TEST_CASE("probabilities are row-stochastic and the objective drops") {
  const auto data = testing::gaussian_blobs(30, 3, 1.0, 3);
  const auto m = train_svm(data.x, data.y, 3, {}, 5);
  const auto p = predict_proba(m, data.x);
  for (std::size_t r = 0; r < p.rows(); ++r) CHECK(std::abs(p(r, 0) + p(r, 1) + p(r, 2) - 1) < 1e-9);
  SvmModel zero = m;
  std::fill(zero.weights.data().begin(), zero.weights.data().end(), 0.0);
  std::fill(zero.bias.begin(), zero.bias.end(), 0.0);
  for (std::size_t c = 0; c < 3; ++c) CHECK(svm_objective(m, data.x, data.y, c) < svm_objective(zero, data.x, data.y, c));
  CHECK(testing::accuracy(data.y, argmax_rows(p)) > 0.85);
  CHECK(train_svm(data.x, data.y, 3, {}, 5) == m);
}
