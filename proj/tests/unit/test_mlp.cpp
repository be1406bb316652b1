#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "sevstack/learners/mlp.hpp"
#include "sevstack/random.hpp"

using namespace sevstack;

TEST_CASE("finite-difference gradient on a 5x4 batch") {
  const auto data = testing::random_problem(5, 4, 3, 17);
  CHECK(testing::mlp_gradient_check(data, 3, {6}, 17).max_relative_error < 1e-4);
}

TEST_CASE("finite-difference gradient across architectures") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = testing::random_problem(5 + seed % 4, 4, 2 + seed % 3, seed);
    const std::vector<std::size_t> hidden = seed % 3 == 0 ? std::vector<std::size_t>{} :
                                            seed % 3 == 1 ? std::vector<std::size_t>{7} :
                                                            std::vector<std::size_t>{5, 3};
    CHECK(testing::mlp_gradient_check(data, 2 + seed % 3, hidden, seed).max_relative_error < 1e-4);
  }
}

TEST_CASE("zero hidden layers is affine plus softmax") {
  const auto data = testing::random_problem(6, 3, 3, 2);
  const auto m = MlpModel::initialize(3, {}, 3, 5);
  REQUIRE(m.layers.size() == 1);
  const auto p = predict_proba(m, data.x);
  for (std::size_t r = 0; r < 6; ++r) {
    std::vector<double> z(3);
    for (std::size_t c = 0; c < 3; ++c) {
      z[c] = m.layers[0].bias[c];
      for (std::size_t j = 0; j < 3; ++j) z[c] += m.layers[0].weights(c, j) * data.x.row(r).at(j);
    }
    const double mx = *std::max_element(z.begin(), z.end());
    double s = 0;
    for (double& v : z) s += (v = std::exp(v - mx));
    for (std::size_t c = 0; c < 3; ++c) CHECK(p(r, c) == doctest::Approx(z[c] / s).epsilon(1e-12));
  }
}

TEST_CASE("identity hidden layer passes nonnegative input through") {
  auto m = MlpModel::initialize(3, {3}, 2, 1);
  m.layers[0].weights = DenseMatrix(3, 3);
  for (std::size_t i = 0; i < 3; ++i) m.layers[0].weights(i, i) = 1.0;
  std::fill(m.layers[0].bias.begin(), m.layers[0].bias.end(), 0.0);
  const auto x = FeatureMatrix::from_rows({{0.5, 0, 2}, {3, 1, 0}});
  const auto acts = mlp_forward(m, x);
  CHECK(acts[0] == x.to_dense());
}

TEST_CASE("initialization range") {
  const auto m = MlpModel::initialize(16, {8}, 3, 4);
  for (double w : m.layers[0].weights.data()) CHECK(std::abs(w) <= 0.25);
  for (double w : m.layers[1].weights.data()) CHECK(std::abs(w) <= 1 / std::sqrt(8.0));
  CHECK(m.layers[0].activation == Activation::relu);
  CHECK(m.layers[1].activation == Activation::softmax);
}

TEST_CASE("training learns blobs deterministically") {
  const auto data = testing::gaussian_blobs(40, 3, 0.8, 6);
  const MlpConfig cfg{.hidden_sizes = {16}, .step = 0.1, .epochs = 60, .batch = 16};
  const auto m = train_mlp(data.x, data.y, 3, cfg, 3);
  CHECK(testing::accuracy(data.y, argmax_rows(predict_proba(m, data.x))) > 0.9);
  CHECK(train_mlp(data.x, data.y, 3, cfg, 3) == m);
  CHECK_FALSE(train_mlp(data.x, data.y, 3, cfg, 4) == m);
}

TEST_CASE("full-batch training ignores row order") {
  const auto data = testing::gaussian_blobs(15, 2, 1.0, 10);
  std::vector<std::size_t> perm(data.x.rows());
  std::iota(perm.begin(), perm.end(), 0);
  Rng(3).shuffle(perm);
  std::vector<std::size_t> y2;
  for (auto i : perm) y2.push_back(data.y[i]);
  const MlpConfig cfg{.hidden_sizes = {8}, .step = 0.2, .epochs = 50, .batch = 1000};
  const auto a = train_mlp(data.x, data.y, 2, cfg, 9);
  const auto b = train_mlp(data.x.select_rows(perm), y2, 2, cfg, 9);
  const auto pa = predict_proba(a, data.x), pb = predict_proba(b, data.x);
  for (std::size_t i = 0; i < pa.data().size(); ++i) CHECK(pa.data()[i] == doctest::Approx(pb.data()[i]).epsilon(1e-9));
}
