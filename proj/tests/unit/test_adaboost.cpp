#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "sevstack/learners/adaboost.hpp"
#include "sevstack/random.hpp"

using namespace sevstack;

namespace {

testing::Dataset ring_data() {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> y;
  Rng rng(12);
  for (int i = 0; i < 150; ++i) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    rows.push_back({a, b});
    y.push_back(a * a + b * b < 1.7 ? 1 : 0);
  }
  return {FeatureMatrix::from_rows(rows), y};
}

double bound(const std::vector<AdaBoostRound>& trace) {
  double b = 1.0;
  for (const auto& r : trace) {
    if (r.kept) b *= 2 * std::sqrt(r.error * (1 - r.error));
  }
  return b;
}

}  // namespace

TEST_CASE("alpha formulas") {
  CHECK(samme_alpha(0.5, 2) == 0.0);
  CHECK(binary_alpha(0.5) == 0.0);
  CHECK(binary_alpha(0.25) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(binary_alpha(0.25) == doctest::Approx(0.5493061443).epsilon(1e-9));
  CHECK(samme_alpha(0.25, 2) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(samme_alpha(0.25, 2) == doctest::Approx(2 * binary_alpha(0.25)).epsilon(1e-15));
  CHECK(samme_alpha(0.5, 3) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("weights stay normalized and the training error bound holds") {
  for (const auto& data : {ring_data(), testing::gaussian_blobs(60, 2, 1.5, 5)}) {
    std::vector<AdaBoostRound> trace;
    const auto m = train_adaboost(data.x, data.y, 2, {.rounds = 40}, &trace);
    REQUIRE_FALSE(trace.empty());
    for (const auto& r : trace) CHECK(std::abs(r.weight_sum - 1.0) < 1e-9);
    const double err = 1 - testing::accuracy(data.y, argmax_rows(predict_proba(m, data.x)));
    CHECK(err <= bound(trace) + 1e-12);
    CHECK(m.alphas.size() == m.weak_classifiers.size());
    for (double a : m.alphas) CHECK(a > 0);
  }
}

TEST_CASE("a useless first stump leaves zero rounds and prior predictions") {
  const auto x = FeatureMatrix::from_rows({{1}, {1}, {1}, {1}, {1}, {1}});
  const std::vector<std::size_t> y{0, 1, 2, 0, 1, 2};
  std::vector<AdaBoostRound> trace;
  const auto m = train_adaboost(x, y, 3, {}, &trace);
  CHECK(m.alphas.empty());
  REQUIRE(trace.size() == 1);
  CHECK_FALSE(trace[0].kept);
  const auto p = predict_proba(m, x);
  for (double v : p.data()) CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("a perfect stump ends training") {
  const auto x = FeatureMatrix::from_rows({{-1}, {-2}, {1}, {2}});
  const std::vector<std::size_t> y{0, 0, 1, 1};
  const auto m = train_adaboost(x, y, 2);
  CHECK(m.alphas.size() == 1);
  CHECK(argmax_rows(predict_proba(m, x)) == y);
}

TEST_CASE("multiclass SAMME beats chance on blobs") {
  const auto data = testing::gaussian_blobs(40, 3, 0.8, 8);
  const auto m = train_adaboost(data.x, data.y, 3);
  CHECK(testing::accuracy(data.y, argmax_rows(predict_proba(m, data.x))) > 0.85);
}
