#include "sevstack/stacking.hpp"

#include <numeric>

#include "learners/model_json.hpp"
#include "sevstack/error.hpp"
#include "sevstack/parallel.hpp"
#include "sevstack/random.hpp"

namespace sevstack {

StackingConfig StackingConfig::defaults(std::uint64_t seed) {
  StackingConfig c;
  c.bases = {LearnerSpec::defaults(LearnerKind::logistic), LearnerSpec::defaults(LearnerKind::gbm),
             LearnerSpec::defaults(LearnerKind::adaboost), LearnerSpec::defaults(LearnerKind::mlp)};
  c.meta = LearnerSpec::defaults(LearnerKind::logistic);
  c.folds = 5;
  c.seed = seed;
  return c;
}

void StackingConfig::validate() const {
  if (folds < 2) throw Error(ErrorCode::validation, "stacking: folds must be >= 2, got " + std::to_string(folds));
  if (bases.empty()) throw Error(ErrorCode::validation, "stacking: at least one base learner is required");
}

std::vector<std::size_t> stratified_folds(Labels y, std::size_t classes, std::size_t folds, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < y.size(); ++i) members.at(y[i]).push_back(i);
  for (std::size_t c = 0; c < classes; ++c) {
    if (members[c].size() < folds) {
      throw Error(ErrorCode::fold, "class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                                       " rows, fewer than " + std::to_string(folds) + " folds");
    }
  }
  std::vector<std::size_t> fold_of(y.size(), 0);
  const Rng root(seed);
  std::size_t next = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    Rng rng = root.fork({0x5f01d, c});
    rng.shuffle(members[c]);
    for (std::size_t i : members[c]) fold_of[i] = next++ % folds;
  }
  return fold_of;
}

std::uint64_t base_seed(const StackingConfig& config, std::size_t index, std::size_t fold) {
  // Keyed by learner settings plus occurrence among identical bases.
  const std::string fp = config.bases.at(index).fingerprint();
  std::size_t occurrence = 0;
  for (std::size_t i = 0; i < index; ++i) {
    if (config.bases[i].fingerprint() == fp) ++occurrence;
  }
  return Rng(config.seed).fork({fnv1a64(fp), occurrence, fold}).key();
}

namespace {

template <class F>
auto annotate(std::size_t index, const LearnerSpec& spec, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "base " + std::to_string(index) + " (" + std::string(kind_name(spec.kind())) + "): " + e.what());
  }
}

std::vector<std::size_t> gather(Labels y, std::span<const std::size_t> rows) {
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(y[r]);
  return out;
}

}  // namespace

OofResult build_oof_matrix(const FeatureMatrix& x, Labels y, std::size_t classes, const StackingConfig& config) {
  config.validate();
  check_training_inputs(x, y, classes, "stacking");
  const std::size_t b_count = config.bases.size();
  const std::size_t k_count = config.folds;
  OofResult out{DenseMatrix(x.rows(), b_count * classes), stratified_folds(y, classes, k_count, config.seed)};

  std::vector<std::vector<std::size_t>> train_rows(k_count), held_rows(k_count);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < k_count; ++k) (out.fold_of[i] == k ? held_rows : train_rows)[k].push_back(i);
  }

  // Each (base, fold) job writes a disjoint block of the matrix.
  parallel_for(
      b_count * k_count,
      [&](std::size_t job) {
        const std::size_t m = job / k_count, k = job % k_count;
        const LearnerSpec& spec = config.bases[m];
        annotate(m, spec, [&] {
          const FeatureMatrix xt = x.select_rows(train_rows[k]);
          const auto yt = gather(y, train_rows[k]);
          const LearnerModel model = train(spec, xt, yt, classes, base_seed(config, m, k));
          const DenseMatrix p = predict_proba(model, x.select_rows(held_rows[k]));
          for (std::size_t i = 0; i < held_rows[k].size(); ++i) {
            for (std::size_t c = 0; c < classes; ++c) out.matrix(held_rows[k][i], m * classes + c) = p(i, c);
          }
          return 0;
        });
      },
      config.threads);
  return out;
}

StackingModel fit_stacking(const FeatureMatrix& x, Labels y, std::size_t classes, const StackingConfig& config) {
  const OofResult oof = build_oof_matrix(x, y, classes, config);
  StackingModel model;
  model.config = config;
  model.classes = classes;
  model.dim = x.dim();
  model.bases.resize(config.bases.size());
  parallel_for(
      config.bases.size(),
      [&](std::size_t m) {
        model.bases[m] = annotate(m, config.bases[m], [&] {
          return train(config.bases[m], x, y, classes, base_seed(config, m, config.folds));
        });
      },
      config.threads);
  const FeatureMatrix meta_x = FeatureMatrix::from_dense(oof.matrix, x.row_ids());
  model.meta = train(config.meta, meta_x, y, classes, Rng(config.seed).fork({0x3e7a}).key());
  return model;
}

FeatureMatrix stack_base_outputs(const StackingModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "stacking");
  const std::size_t c_count = model.classes;
  DenseMatrix z(x.rows(), model.bases.size() * c_count);
  for (std::size_t m = 0; m < model.bases.size(); ++m) {
    const DenseMatrix p = predict_proba(model.bases[m], x);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < c_count; ++c) z(r, m * c_count + c) = p(r, c);
    }
  }
  return FeatureMatrix::from_dense(z, x.row_ids());
}

DenseMatrix predict_stacking(const StackingModel& model, const FeatureMatrix& x) {
  return predict_proba(model.meta, stack_base_outputs(model, x));
}

std::string to_json(const StackingModel& model) {
  detail::Json j;
  j["format"] = kModelFormat;
  j["kind"] = "stacking";
  j["classes"] = model.classes;
  j["dim"] = model.dim;
  detail::Json cfg;
  cfg["folds"] = model.config.folds;
  cfg["seed"] = model.config.seed;
  cfg["bases"] = detail::Json::array();
  for (const auto& s : model.config.bases) cfg["bases"].push_back(detail::spec_to_json(s));
  cfg["meta"] = detail::spec_to_json(model.config.meta);
  j["config"] = std::move(cfg);
  j["bases"] = detail::Json::array();
  for (const auto& b : model.bases) j["bases"].push_back(detail::model_to_json(b));
  j["meta"] = detail::model_to_json(model.meta);
  return j.dump();
}

StackingModel stacking_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("kind").get<std::string>() != "stacking") throw Error(ErrorCode::format, "not a stacking model document");
    if (j.at("format").get<int>() != kModelFormat) throw Error(ErrorCode::format, "unsupported stacking format");
    StackingModel m;
    m.classes = j.at("classes").get<std::size_t>();
    m.dim = j.at("dim").get<std::size_t>();
    const auto& cfg = j.at("config");
    m.config.folds = cfg.at("folds").get<std::size_t>();
    m.config.seed = cfg.at("seed").get<std::uint64_t>();
    for (const auto& s : cfg.at("bases")) m.config.bases.push_back(detail::spec_from_json(s));
    m.config.meta = detail::spec_from_json(cfg.at("meta"));
    for (const auto& b : j.at("bases")) m.bases.push_back(detail::model_from_json(b));
    m.meta = detail::model_from_json(j.at("meta"));
    if (m.bases.size() != m.config.bases.size()) throw Error(ErrorCode::format, "stacking: base count mismatch");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, std::string("stacking document: ") + e.what());
  }
}

}  // namespace sevstack
