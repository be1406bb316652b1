#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sevstack/learners/adaboost.hpp"
#include "sevstack/learners/common.hpp"
#include "sevstack/learners/gbm.hpp"
#include "sevstack/learners/logistic.hpp"
#include "sevstack/learners/mlp.hpp"
#include "sevstack/learners/naive_bayes.hpp"
#include "sevstack/learners/svm.hpp"

namespace sevstack {

enum class LearnerKind { logistic, gbm, adaboost, mlp, naive_bayes, svm };

/// Short name used in files and on the command line: lr, gbm, adaboost, mlp, nb, svm.
std::string_view kind_name(LearnerKind kind) noexcept;
/// Accepts the short names plus "logistic" and "naive_bayes".
LearnerKind parse_learner_kind(std::string_view name);

using LearnerConfig = std::variant<LogisticConfig, GbmConfig, AdaBoostConfig, MlpConfig, NaiveBayesConfig, SvmConfig>;

struct LearnerSpec {
  LearnerConfig config;

  LearnerKind kind() const noexcept { return static_cast<LearnerKind>(config.index()); }

  static LearnerSpec defaults(LearnerKind kind);
  /// Defaults overridden by string parameters; unknown keys or unparsable
  /// values raise Error(validation).
  static LearnerSpec with_params(LearnerKind kind, const std::map<std::string, std::string>& params);

  /// Canonical text of kind + hyperparameters.
  std::string fingerprint() const;

  friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

using LearnerModel = std::variant<LogisticModel, GbmModel, AdaBoostModel, MlpModel, NaiveBayesModel, SvmModel>;

LearnerKind kind_of(const LearnerModel& model) noexcept;
std::size_t model_classes(const LearnerModel& model) noexcept;
std::size_t model_dim(const LearnerModel& model) noexcept;

/// Trains the learner described by `spec`. Deterministic in (x, y, spec, seed).
LearnerModel train(const LearnerSpec& spec, const FeatureMatrix& x, Labels y, std::size_t classes,
                   std::uint64_t seed);

/// Row-stochastic class probabilities. Throws Error(contract) on a dim mismatch.
DenseMatrix predict_proba(const LearnerModel& model, const FeatureMatrix& x);
/// Row argmax of predict_proba, ties to the lowest class index.
std::vector<std::size_t> predict_label(const LearnerModel& model, const FeatureMatrix& x);

/// Self-describing JSON: {"format": 1, "kind": ..., parameters}.
std::string to_json(const LearnerModel& model);
LearnerModel learner_from_json(std::string_view json);

inline constexpr int kModelFormat = 1;

}  // namespace sevstack
