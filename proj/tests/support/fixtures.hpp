#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sevstack/corpus.hpp"
#include "sevstack/feature_matrix.hpp"

namespace sevstack::testing {

struct Dataset {
  FeatureMatrix x;
  std::vector<std::size_t> y;
};

/// `classes` isotropic Gaussian clusters in `dim` dimensions with centers on a
/// circle of radius 2 in the first two coordinates, `per_class` points each,
/// rows interleaved by class.
Dataset gaussian_blobs(std::size_t per_class, std::size_t classes, double sigma, std::uint64_t seed,
                       std::size_t dim = 2);

/// Random dense matrix with entries uniform in [-1, 1] and random labels
/// covering every class.
Dataset random_problem(std::size_t rows, std::size_t dim, std::size_t classes, std::uint64_t seed);

/// Corpus with ids d0, d1, ...; documents past the end of `labels` are unlabeled.
Corpus make_corpus(const std::vector<std::string>& texts, const std::vector<std::size_t>& labels,
                   const LabelScheme& scheme);
Corpus make_corpus(const std::vector<std::string>& texts);

/// Space-separated documents over words w0..w{vocab-1}.
std::vector<std::string> random_documents(std::size_t docs, std::size_t vocab, std::size_t max_len,
                                          std::uint64_t seed);

/// CSV table (id,text,label) of short posts: each class draws most words from
/// its own pool plus AFINN-scored words whose valence falls with severity.
std::string posts_table(const std::vector<std::string>& classes, std::size_t per_class, std::uint64_t seed);

/// Brute-force TF-IDF over whitespace-split documents: nested loops, sorted
/// vocabulary, smoothed idf, L2-normalized rows.
struct TfidfOracle {
  std::vector<std::string> terms;
  std::vector<double> idf;
  std::vector<std::vector<double>> rows;
};
TfidfOracle tfidf_oracle(const std::vector<std::string>& documents);

/// Weighted metrics recomputed from raw label lists without a confusion matrix.
struct MetricOracle {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};
MetricOracle metric_oracle(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred,
                           std::size_t classes);

double accuracy(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};


/// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|, floor),
/// numeric being the central difference with step h.
struct GradientCheck {
  double max_relative_error = 0;
  std::size_t parameters = 0;
};
inline constexpr double kGradientFloor = 1e-6;
GradientCheck logistic_gradient_check(const Dataset& data, std::size_t classes, double l2, std::uint64_t seed,
                                      double h = 1e-5);
GradientCheck mlp_gradient_check(const Dataset& data, std::size_t classes, const std::vector<std::size_t>& hidden,
                                 std::uint64_t seed, double h = 1e-5);

}  // namespace sevstack::testing
