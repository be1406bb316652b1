#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sevstack/feature_matrix.hpp"

namespace sevstack {

using Labels = std::span<const std::size_t>;

/// Shared training precondition: labels align with rows, every label is
/// < classes, rows >= classes and every class occurs.
void check_training_inputs(const FeatureMatrix& x, Labels y, std::size_t classes, std::string_view learner);

/// Throws Error(contract) naming expected/actual dims.
void check_feature_dim(std::size_t expected, std::size_t actual, std::string_view learner);

/// In-place numerically stable softmax.
void softmax_inplace(std::span<double> z) noexcept;

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> v) noexcept;

/// Per-row argmax of a probability matrix.
std::vector<std::size_t> argmax_rows(const DenseMatrix& proba);

/// Empirical class frequencies.
std::vector<double> class_priors(Labels y, std::size_t classes);

/// Mean negative log-likelihood of the gold class under row-stochastic `proba`.
double mean_log_loss(const DenseMatrix& proba, Labels y);

}  // namespace sevstack
