#include "doctest.h"

#include <limits>

#include "fixtures.hpp"
#include "sevstack/error.hpp"
#include "sevstack/feature_matrix.hpp"

using namespace sevstack;

namespace {

FeatureMatrix small_sparse() {
  return FeatureMatrix::sparse(5, {"a", "b", "c"}, {0, 2, 2, 3}, {1, 4, 0}, {0.5, -1.25, 3.0});
}

}  // namespace

TEST_CASE("sparse rows") {
  const auto m = small_sparse();
  CHECK(m.nonzeros() == 3);
  CHECK(m.row(0).at(4) == -1.25);
  CHECK(m.row(0).at(2) == 0.0);
  CHECK(m.row(1).squared_norm() == 0.0);
  const std::vector<double> w{1, 2, 3, 4, 5};
  CHECK(m.row(0).dot(w) == doctest::Approx(1.0 - 6.25));
  std::vector<double> acc(5, 0.0);
  m.row(2).axpy(2.0, acc);
  CHECK(acc[0] == 6.0);
  const DenseMatrix d = m.to_dense();
  CHECK(d(0, 1) == 0.5);
  CHECK(d(2, 0) == 3.0);
}

TEST_CASE("select, slice and concat") {
  const auto m = small_sparse();
  const std::vector<std::size_t> pick{2, 0};
  const auto s = m.select_rows(pick);
  CHECK(s.row_ids() == std::vector<std::string>{"c", "a"});
  CHECK(s.row(1).at(4) == -1.25);
  const auto tail = m.slice_columns(3, 2);
  CHECK(tail.dim() == 2);
  CHECK(tail.row(0).at(1) == -1.25);
  const auto both = m.concat_columns(FeatureMatrix::dense(1, {"a", "b", "c"}, {7, 8, 9}));
  CHECK(both.dim() == 6);
  CHECK(both.row(1).at(5) == 8);
  CHECK(both.slice_columns(0, 5).to_dense() == m.to_dense());
  CHECK_THROWS_AS(m.concat_columns(FeatureMatrix::dense(1, {"a", "b", "x"}, {7, 8, 9})), Error);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(FeatureMatrix::sparse(2, {"a"}, {0, 1}, {2}, {1.0}), Error);
  CHECK_THROWS_AS(FeatureMatrix::sparse(3, {"a"}, {0, 2}, {1, 1}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(FeatureMatrix::dense(1, {"a", "a"}, {1, 2}), Error);
  CHECK_THROWS_AS(FeatureMatrix::dense(1, {"a"}, {std::numeric_limits<double>::quiet_NaN()}), Error);
  CHECK_THROWS_AS(FeatureMatrix::dense(2, {"a"}, {1}), Error);
}

TEST_CASE("jsonl persistence round trips both storages") {
  testing::TempDir dir("fm");
  const auto sparse = small_sparse();
  write_feature_matrix(sparse, dir / "s.jsonl");
  CHECK(read_feature_matrix(dir / "s.jsonl") == sparse);
  const auto dense = FeatureMatrix::dense(2, {"x", "y"}, {0.1, 1.0 / 3, -0.0, 1e-310});
  CHECK(parse_feature_matrix(to_jsonl(dense)) == dense);
  try {
    parse_feature_matrix("{\"id\":\"x\",\"vec\":[1]}\n{\"id\":\"y\",\"vec\":[1,2]}\n");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::format);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
