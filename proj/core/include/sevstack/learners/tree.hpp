#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sevstack/feature_matrix.hpp"

namespace sevstack {

/// Axis-aligned binary tree. Internal nodes send `x[feature] <= threshold`
/// left; leaves carry a value (a regression output, or a class index for
/// classification trees).
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double value = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes);

  /// Single leaf tree.
  static DecisionTree constant(double value) { return DecisionTree({Node{-1, 0.0, 0, 0, value}}); }

  double predict(const RowView& row) const noexcept;
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const noexcept;
  std::size_t depth() const noexcept;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<Node> nodes_;
};

using RegressionTree = DecisionTree;

/// Per-feature quantized view of a training matrix. Features with at most
/// `max_bins` distinct values get one bin per value (exact splits); others get
/// count-quantile bins. Zeros are implicit so sparse input stays sparse.
class BinnedFeatures {
 public:
  BinnedFeatures(const FeatureMatrix& x, std::size_t max_bins = 255);

  struct Entry {
    std::uint32_t row;
    std::uint32_t bin;  // global bin id
  };

  std::size_t rows() const noexcept { return rows_; }
  std::size_t features() const noexcept { return first_bin_.size() - 1; }
  std::size_t total_bins() const noexcept { return first_bin_.back(); }
  std::size_t first_bin(std::size_t f) const noexcept { return first_bin_[f]; }
  std::size_t bin_count(std::size_t f) const noexcept { return first_bin_[f + 1] - first_bin_[f]; }
  /// Global bin id holding value 0 for feature f.
  std::size_t zero_bin(std::size_t f) const noexcept { return zero_bin_[f]; }
  /// Threshold separating local bin b from b + 1 of feature f.
  double cut(std::size_t f, std::size_t local_bin) const noexcept { return cuts_[first_bin_[f] - f + local_bin]; }
  std::span<const Entry> column(std::size_t f) const noexcept {
    return {entries_.data() + col_offset_[f], col_offset_[f + 1] - col_offset_[f]};
  }

 private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> first_bin_;   // features + 1
  std::vector<std::size_t> zero_bin_;    // features
  std::vector<double> cuts_;             // bin_count(f) - 1 per feature
  std::vector<std::size_t> col_offset_;  // features + 1
  std::vector<Entry> entries_;           // nonzero-bin entries, column-major
};

/// Generic level-wise tree growth over binned features. Each row carries a
/// `width`-wide statistics vector whose last slot is the row count; the
/// split maximizes score(left) + score(right) - score(parent).
struct TreeGrowth {
  std::size_t max_depth = 3;
  std::size_t min_leaf = 1;
  double min_gain = 1e-12;
  std::size_t width = 2;
  std::function<double(std::span<const double>)> score;
  std::function<double(std::span<const double>)> leaf_value;
};

/// Grows a tree over the rows flagged in `active` (all rows when empty).
/// `row_stats` is rows x width row-major.
DecisionTree grow_tree(const BinnedFeatures& bins, std::span<const double> row_stats, const TreeGrowth& growth);

/// Squared-error regression tree on targets (mean leaves).
DecisionTree fit_regression_tree(const BinnedFeatures& bins, std::span<const double> targets, std::size_t max_depth,
                                 std::size_t min_leaf);

}  // namespace sevstack
