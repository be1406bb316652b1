#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sevstack {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One feature row, either a dense span or sorted (index, value) pairs.
struct RowView {
  bool is_dense = true;
  std::span<const double> dense;
  std::span<const std::uint32_t> idx;
  std::span<const double> val;

  double dot(std::span<const double> w) const noexcept;
  /// w += a * x
  void axpy(double a, std::span<double> w) const noexcept;
  /// Value at column j (binary search for sparse rows).
  double at(std::size_t j) const noexcept;
  double squared_norm() const noexcept;

  template <class F>
  void for_each_nonzero(F&& f) const {
    if (is_dense) {
      for (std::size_t j = 0; j < dense.size(); ++j) {
        if (dense[j] != 0.0) f(j, dense[j]);
      }
    } else {
      for (std::size_t k = 0; k < idx.size(); ++k) f(static_cast<std::size_t>(idx[k]), val[k]);
    }
  }
};

/// Row-per-document features with aligned document ids. Immutable once built.
class FeatureMatrix {
 public:
  enum class Storage { dense, sparse };

  FeatureMatrix() = default;

  /// `values` is rows x dim row-major, rows = row_ids.size().
  static FeatureMatrix dense(std::size_t dim, std::vector<std::string> row_ids, std::vector<double> values);
  /// CSR layout: row r owns [offsets[r], offsets[r+1]); indices strictly
  /// increasing within a row.
  static FeatureMatrix sparse(std::size_t dim, std::vector<std::string> row_ids, std::vector<std::size_t> offsets,
                              std::vector<std::uint32_t> indices, std::vector<double> values);
  /// Dense matrix with ids "r0", "r1", ...
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static FeatureMatrix from_dense(const DenseMatrix& m, std::vector<std::string> row_ids = {});

  std::size_t rows() const noexcept { return row_ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  Storage storage() const noexcept { return storage_; }
  bool is_sparse() const noexcept { return storage_ == Storage::sparse; }
  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
  RowView row(std::size_t r) const noexcept;
  std::size_t nonzeros() const noexcept;

  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  DenseMatrix to_dense() const;
  /// Columns [first, first + count) as a dense matrix with the same ids.
  FeatureMatrix slice_columns(std::size_t first, std::size_t count) const;
  /// Row-wise concatenation [this | other]; ids must match.
  FeatureMatrix concat_columns(const FeatureMatrix& other) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  void validate() const;

  Storage storage_ = Storage::dense;
  std::size_t dim_ = 0;
  std::vector<std::string> row_ids_;
  std::vector<double> values_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
};

/// JSON Lines persistence: dense rows as {"id", "vec"}, sparse rows as
/// {"id", "idx", "val", "dim"}.
std::string to_jsonl(const FeatureMatrix& m);
FeatureMatrix parse_feature_matrix(std::string_view content, std::string_view source = "<memory>");
void write_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix read_feature_matrix(const std::filesystem::path& path);

}  // namespace sevstack
