#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "sevstack/error.hpp"
#include "sevstack/learners/logistic.hpp"

using namespace sevstack;

TEST_CASE("zero model predicts uniformly") {
  const auto x = testing::random_problem(7, 3, 4, 1).x;
  const auto p = predict_proba(LogisticModel::zeros(4, 3), x);
  for (double v : p.data()) CHECK(v == 0.25);
}

TEST_CASE("1-D separable data is fit exactly") {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> y;
  for (int i = 1; i <= 10; ++i) {
    rows.push_back({-0.1 * i});
    y.push_back(0);
    rows.push_back({0.1 * i});
    y.push_back(1);
  }
  const auto x = FeatureMatrix::from_rows(rows);
  const auto m = train_logistic(x, y, 2, {.l2 = 1e-4});
  CHECK(argmax_rows(predict_proba(m, x)) == y);
}

TEST_CASE("two-class softmax equals the sigmoid of the weight difference") {
  const auto data = testing::random_problem(30, 4, 2, 9);
  const auto m = train_logistic(data.x, data.y, 2, {.l2 = 1e-3, .max_iters = 200});
  const auto p = predict_proba(m, data.x);
  for (std::size_t r = 0; r < data.x.rows(); ++r) {
    double z = m.bias[1] - m.bias[0];
    for (std::size_t j = 0; j < 4; ++j) z += (m.weights(1, j) - m.weights(0, j)) * data.x.row(r).at(j);
    const double sigmoid = 1 / (1 + std::exp(-z));
    CHECK(p(r, 1) == doctest::Approx(sigmoid).epsilon(1e-12));
    CHECK((p(r, 1) > 0.5) == (z > 0));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = testing::random_problem(6, 5, 2 + seed % 3, seed);
    const auto g = testing::logistic_gradient_check(data, 2 + seed % 3, 0.1, seed);
    CHECK(g.max_relative_error < 1e-5);
  }
}

TEST_CASE("training lowers the objective and is deterministic") {
  const auto data = testing::gaussian_blobs(20, 3, 1.0, 2);
  const auto m = train_logistic(data.x, data.y, 3);
  const double start = logistic_objective(LogisticModel::zeros(3, 2), data.x, data.y, 1e-4).loss;
  CHECK(logistic_objective(m, data.x, data.y, 1e-4).loss < start);
  CHECK(train_logistic(data.x, data.y, 3) == m);
}

TEST_CASE("divergence names the iteration") {
  const auto x = FeatureMatrix::from_rows({{1e300}, {-1e300}});
  const std::vector<std::size_t> y{0, 1};
  try {
    train_logistic(x, y, 2, {.l2 = 0, .max_iters = 10, .step = 1.0});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::divergence);
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("input contract") {
  const auto data = testing::random_problem(6, 2, 2, 3);
  const std::vector<std::size_t> short_y{0, 1};
  CHECK_THROWS_AS(train_logistic(data.x, short_y, 2), Error);
  const std::vector<std::size_t> missing{0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(train_logistic(data.x, missing, 2), Error);
  const auto m = train_logistic(data.x, data.y, 2, {.max_iters = 5});
  try {
    predict_proba(m, FeatureMatrix::from_rows({{1, 2, 3}}));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::contract);
    CHECK(std::string(e.what()).find('2') != std::string::npos);
    CHECK(std::string(e.what()).find('3') != std::string::npos);
  }
}
