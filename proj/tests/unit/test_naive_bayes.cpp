#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "sevstack/error.hpp"
#include "sevstack/learners/naive_bayes.hpp"

using namespace sevstack;

TEST_CASE("single-class training set") {
  const auto x = FeatureMatrix::from_rows({{1, 0}, {0, 2}});
  const std::vector<std::size_t> y{0, 0};
  const auto m = train_naive_bayes(x, y, 1);
  const auto p = predict_proba(m, x);
  for (double v : p.data()) CHECK(v == 1.0);
}

TEST_CASE("disjoint single-term documents") {
  const auto x = FeatureMatrix::from_rows({{1, 0}, {0, 1}});
  const std::vector<std::size_t> y{0, 1};
  const auto m = train_naive_bayes(x, y, 2);
  const auto p = predict_proba(m, x);
  CHECK(p(0, 0) == doctest::Approx(2.0 / 3));
  CHECK(p(1, 1) == doctest::Approx(2.0 / 3));
  for (std::size_t c = 0; c < 2; ++c) {
    double total = 0;
    for (std::size_t j = 0; j < 2; ++j) total += std::exp(m.log_likelihood(c, j));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("huge alpha approaches the priors") {
  const auto data = testing::random_problem(30, 5, 3, 1);
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < 30; ++r) {
    std::vector<double> row;
    for (std::size_t j = 0; j < 5; ++j) row.push_back(std::abs(data.x.row(r).at(j)));
    rows.push_back(row);
  }
  const auto x = FeatureMatrix::from_rows(rows);
  const auto m = train_naive_bayes(x, data.y, 3, {.alpha = 1e6});
  const auto priors = class_priors(data.y, 3);
  const auto p = predict_proba(m, x);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(p(r, c) - priors[c]) < 1e-3);
  }
}

TEST_CASE("negative features are rejected") {
  const auto x = FeatureMatrix::from_rows({{1, -0.5}, {0, 1}});
  const std::vector<std::size_t> y{0, 1};
  try {
    train_naive_bayes(x, y, 2);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::contract);
  }
}
