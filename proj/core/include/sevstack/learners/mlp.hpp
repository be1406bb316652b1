#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sevstack/learners/common.hpp"

namespace sevstack {

struct MlpConfig {
  std::vector<std::size_t> hidden_sizes{128};
  double step = 0.01;
  std::size_t epochs = 30;
  std::size_t batch = 32;

  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

enum class Activation { relu, softmax };

/// h = act(W h_prev + b); W is out x in.
struct DenseLayer {
  DenseMatrix weights;
  std::vector<double> bias;
  Activation activation = Activation::relu;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Feed-forward network: ReLU hidden layers, softmax output layer.
struct MlpModel {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<DenseLayer> layers;

  /// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  static MlpModel initialize(std::size_t dim, const std::vector<std::size_t>& hidden_sizes, std::size_t classes,
                             std::uint64_t seed);

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Activations of every layer for every row: result[l] is rows x width(l),
/// the last entry being the softmax output.
std::vector<DenseMatrix> mlp_forward(const MlpModel& model, const FeatureMatrix& x);

/// Mean cross-entropy over `rows` (all rows when empty) and its backprop gradient.
struct MlpGradient {
  double loss = 0.0;
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> bias;
};

MlpGradient mlp_loss_and_gradient(const MlpModel& model, const FeatureMatrix& x, Labels y,
                                  std::span<const std::size_t> rows = {});

/// Mini-batch SGD; batches are reshuffled every epoch from `seed`. A batch at
/// least as large as the data gives full-batch descent in row order.
MlpModel train_mlp(const FeatureMatrix& x, Labels y, std::size_t classes, const MlpConfig& config = {},
                   std::uint64_t seed = 0);

DenseMatrix predict_proba(const MlpModel& model, const FeatureMatrix& x);

}  // namespace sevstack
