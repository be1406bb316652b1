#include "sevstack/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "json.hpp"
#include "sevstack/corpus.hpp"
#include "sevstack/error.hpp"

namespace sevstack {

double RowView::dot(std::span<const double> w) const noexcept {
  double s = 0.0;
  if (is_dense) {
    for (std::size_t j = 0; j < dense.size(); ++j) s += dense[j] * w[j];
  } else {
    for (std::size_t k = 0; k < idx.size(); ++k) s += val[k] * w[idx[k]];
  }
  return s;
}

void RowView::axpy(double a, std::span<double> w) const noexcept {
  if (is_dense) {
    for (std::size_t j = 0; j < dense.size(); ++j) w[j] += a * dense[j];
  } else {
    for (std::size_t k = 0; k < idx.size(); ++k) w[idx[k]] += a * val[k];
  }
}

double RowView::at(std::size_t j) const noexcept {
  if (is_dense) return dense[j];
  const auto it = std::lower_bound(idx.begin(), idx.end(), static_cast<std::uint32_t>(j));
  if (it == idx.end() || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - idx.begin())];
}

double RowView::squared_norm() const noexcept {
  double s = 0.0;
  for (double v : is_dense ? dense : val) s += v * v;
  return s;
}

FeatureMatrix FeatureMatrix::dense(std::size_t dim, std::vector<std::string> row_ids, std::vector<double> values) {
  FeatureMatrix m;
  m.storage_ = Storage::dense;
  m.dim_ = dim;
  m.row_ids_ = std::move(row_ids);
  m.values_ = std::move(values);
  m.validate();
  return m;
}

FeatureMatrix FeatureMatrix::sparse(std::size_t dim, std::vector<std::string> row_ids,
                                    std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices,
                                    std::vector<double> values) {
  FeatureMatrix m;
  m.storage_ = Storage::sparse;
  m.dim_ = dim;
  m.row_ids_ = std::move(row_ids);
  m.offsets_ = std::move(offsets);
  m.indices_ = std::move(indices);
  m.values_ = std::move(values);
  m.validate();
  return m;
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<std::string> ids;
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) throw Error(ErrorCode::contract, "from_rows: ragged rows");
    ids.push_back("r" + std::to_string(r));
    values.insert(values.end(), rows[r].begin(), rows[r].end());
  }
  return dense(dim, std::move(ids), std::move(values));
}

FeatureMatrix FeatureMatrix::from_dense(const DenseMatrix& mat, std::vector<std::string> row_ids) {
  if (row_ids.empty()) {
    for (std::size_t r = 0; r < mat.rows(); ++r) row_ids.push_back("r" + std::to_string(r));
  }
  return dense(mat.cols(), std::move(row_ids), mat.data());
}

void FeatureMatrix::validate() const {
  std::unordered_set<std::string_view> seen;
  seen.reserve(row_ids_.size());
  for (const auto& id : row_ids_) {
    if (!seen.insert(id).second) throw Error(ErrorCode::contract, "duplicate feature row id '" + id + "'");
  }
  if (storage_ == Storage::dense) {
    if (values_.size() != row_ids_.size() * dim_) {
      throw Error(ErrorCode::contract, "dense feature matrix: value count does not match rows x dim");
    }
  } else {
    if (offsets_.size() != row_ids_.size() + 1 || offsets_.front() != 0 || offsets_.back() != indices_.size() ||
        indices_.size() != values_.size()) {
      throw Error(ErrorCode::contract, "sparse feature matrix: inconsistent CSR arrays");
    }
    for (std::size_t r = 0; r < row_ids_.size(); ++r) {
      if (offsets_[r] > offsets_[r + 1]) throw Error(ErrorCode::contract, "sparse feature matrix: offsets decrease");
      for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
        if (indices_[k] >= dim_) {
          throw Error(ErrorCode::contract, "sparse feature matrix: index " + std::to_string(indices_[k]) +
                                               " >= dim " + std::to_string(dim_));
        }
        if (k > offsets_[r] && indices_[k] <= indices_[k - 1]) {
          throw Error(ErrorCode::contract, "sparse feature matrix: indices not strictly increasing");
        }
      }
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::contract, "feature matrix holds a non-finite value");
  }
}

RowView FeatureMatrix::row(std::size_t r) const noexcept {
  RowView v;
  if (storage_ == Storage::dense) {
    v.is_dense = true;
    v.dense = std::span<const double>(values_.data() + r * dim_, dim_);
  } else {
    v.is_dense = false;
    const std::size_t b = offsets_[r], e = offsets_[r + 1];
    v.idx = std::span<const std::uint32_t>(indices_.data() + b, e - b);
    v.val = std::span<const double>(values_.data() + b, e - b);
  }
  return v;
}

std::size_t FeatureMatrix::nonzeros() const noexcept {
  if (storage_ == Storage::sparse) return values_.size();
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double x) { return x != 0.0; }));
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (std::size_t r : rows) ids.push_back(row_ids_.at(r));
  if (storage_ == Storage::dense) {
    std::vector<double> values;
    values.reserve(rows.size() * dim_);
    for (std::size_t r : rows) {
      const auto src = row(r).dense;
      values.insert(values.end(), src.begin(), src.end());
    }
    return dense(dim_, std::move(ids), std::move(values));
  }
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  for (std::size_t r : rows) {
    const RowView v = row(r);
    indices.insert(indices.end(), v.idx.begin(), v.idx.end());
    values.insert(values.end(), v.val.begin(), v.val.end());
    offsets.push_back(indices.size());
  }
  return sparse(dim_, std::move(ids), std::move(offsets), std::move(indices), std::move(values));
}

DenseMatrix FeatureMatrix::to_dense() const {
  DenseMatrix out(rows(), dim_);
  for (std::size_t r = 0; r < rows(); ++r) {
    row(r).for_each_nonzero([&](std::size_t j, double v) { out(r, j) = v; });
  }
  return out;
}

FeatureMatrix FeatureMatrix::slice_columns(std::size_t first, std::size_t count) const {
  if (first + count > dim_) throw Error(ErrorCode::contract, "slice_columns: range exceeds dim");
  std::vector<double> values(rows() * count, 0.0);
  for (std::size_t r = 0; r < rows(); ++r) {
    row(r).for_each_nonzero([&](std::size_t j, double v) {
      if (j >= first && j < first + count) values[r * count + (j - first)] = v;
    });
  }
  return dense(count, row_ids_, std::move(values));
}

FeatureMatrix FeatureMatrix::concat_columns(const FeatureMatrix& other) const {
  if (other.row_ids_ != row_ids_) throw Error(ErrorCode::join, "concat_columns: row ids differ");
  const std::size_t d = dim_ + other.dim_;
  if (storage_ == Storage::dense && other.storage_ == Storage::dense) {
    std::vector<double> values;
    values.reserve(rows() * d);
    for (std::size_t r = 0; r < rows(); ++r) {
      const auto a = row(r).dense, b = other.row(r).dense;
      values.insert(values.end(), a.begin(), a.end());
      values.insert(values.end(), b.begin(), b.end());
    }
    return dense(d, row_ids_, std::move(values));
  }
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows(); ++r) {
    row(r).for_each_nonzero([&](std::size_t j, double v) {
      indices.push_back(static_cast<std::uint32_t>(j));
      values.push_back(v);
    });
    other.row(r).for_each_nonzero([&](std::size_t j, double v) {
      indices.push_back(static_cast<std::uint32_t>(dim_ + j));
      values.push_back(v);
    });
    offsets.push_back(indices.size());
  }
  return sparse(d, row_ids_, std::move(offsets), std::move(indices), std::move(values));
}

std::string to_jsonl(const FeatureMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json j;
    j["id"] = m.row_ids()[r];
    const RowView v = m.row(r);
    if (v.is_dense) {
      j["vec"] = std::vector<double>(v.dense.begin(), v.dense.end());
    } else {
      j["idx"] = std::vector<std::uint32_t>(v.idx.begin(), v.idx.end());
      j["val"] = std::vector<double>(v.val.begin(), v.val.end());
      j["dim"] = m.dim();
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

FeatureMatrix parse_feature_matrix(std::string_view content, std::string_view source) {
  std::vector<std::string> ids;
  std::vector<double> dense_values;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> sparse_values;
  std::optional<bool> is_sparse;
  std::optional<std::size_t> dim;
  std::size_t line_no = 0, start = 0;
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::format, std::string(source) + ": line " + std::to_string(line_no) + ": " + why);
  };
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) throw fail("expected object with string 'id'");
      const bool sparse_row = j.contains("idx");
      if (is_sparse && *is_sparse != sparse_row) throw fail("mixed dense and sparse rows");
      is_sparse = sparse_row;
      ids.push_back(j["id"].get<std::string>());
      if (sparse_row) {
        const auto d = j.at("dim").get<std::size_t>();
        if (dim && *dim != d) throw fail("dim " + std::to_string(d) + " differs from " + std::to_string(*dim));
        dim = d;
        auto idx = j.at("idx").get<std::vector<std::uint32_t>>();
        auto val = j.at("val").get<std::vector<double>>();
        if (idx.size() != val.size()) throw fail("idx/val length mismatch");
        indices.insert(indices.end(), idx.begin(), idx.end());
        sparse_values.insert(sparse_values.end(), val.begin(), val.end());
        offsets.push_back(indices.size());
      } else {
        auto vec = j.at("vec").get<std::vector<double>>();
        if (dim && *dim != vec.size()) {
          throw fail("vector length " + std::to_string(vec.size()) + " differs from " + std::to_string(*dim));
        }
        dim = vec.size();
        dense_values.insert(dense_values.end(), vec.begin(), vec.end());
      }
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
  }
  try {
    if (is_sparse.value_or(false)) {
      return FeatureMatrix::sparse(dim.value_or(0), std::move(ids), std::move(offsets), std::move(indices),
                                   std::move(sparse_values));
    }
    return FeatureMatrix::dense(dim.value_or(0), std::move(ids), std::move(dense_values));
  } catch (const Error& e) {
    throw Error(ErrorCode::format, std::string(source) + ": " + e.what());
  }
}

void write_feature_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
  write_file(path, to_jsonl(m));
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  return parse_feature_matrix(read_file(path), path.string());
}

}  // namespace sevstack
