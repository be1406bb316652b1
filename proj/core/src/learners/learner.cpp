#include "sevstack/learners/learner.hpp"

#include <charconv>

#include "model_json.hpp"
#include "sevstack/error.hpp"
#include "sevstack/random.hpp"
#include "sevstack/text.hpp"

namespace sevstack {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = text::trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw Error(ErrorCode::validation, "parameter '" + key + "': '" + value + "' is not a number");
  }
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  const std::string v = text::trim(value);
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw Error(ErrorCode::validation, "parameter '" + key + "': '" + value + "' is not a non-negative integer");
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::string_view rest = value;
  while (!text::trim(rest).empty()) {
    const auto comma = rest.find_first_of(",x ");
    const std::string item(rest.substr(0, comma));
    if (!text::trim(item).empty()) out.push_back(parse_size(key, item));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

using detail::Json;

Json matrix_json(const DenseMatrix& m) { return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

DenseMatrix matrix_from(const nlohmann::json& j) {
  DenseMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.data().size()) throw Error(ErrorCode::format, "matrix data length mismatch");
  m.data() = std::move(data);
  return m;
}

Json tree_json(const DecisionTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes()) {
    if (n.feature < 0) {
      nodes.push_back(Json{{"value", n.value}});
    } else {
      nodes.push_back(Json{{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                           {"right", n.right}, {"value", n.value}});
    }
  }
  return nodes;
}

DecisionTree tree_from(const nlohmann::json& j) {
  std::vector<DecisionTree::Node> nodes;
  for (const auto& n : j) {
    DecisionTree::Node node;
    node.value = n.at("value").get<double>();
    if (n.contains("feature")) {
      node.feature = n.at("feature").get<std::int32_t>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<std::uint32_t>();
      node.right = n.at("right").get<std::uint32_t>();
    }
    nodes.push_back(node);
  }
  return DecisionTree(std::move(nodes));
}

}  // namespace

std::string_view kind_name(LearnerKind kind) noexcept {
  switch (kind) {
    case LearnerKind::logistic: return "lr";
    case LearnerKind::gbm: return "gbm";
    case LearnerKind::adaboost: return "adaboost";
    case LearnerKind::mlp: return "mlp";
    case LearnerKind::naive_bayes: return "nb";
    case LearnerKind::svm: return "svm";
  }
  return "lr";
}

LearnerKind parse_learner_kind(std::string_view name) {
  const std::string n = text::fold_case(text::trim(name));
  if (n == "lr" || n == "logistic") return LearnerKind::logistic;
  if (n == "gbm") return LearnerKind::gbm;
  if (n == "adaboost" || n == "ada") return LearnerKind::adaboost;
  if (n == "mlp") return LearnerKind::mlp;
  if (n == "nb" || n == "naive_bayes") return LearnerKind::naive_bayes;
  if (n == "svm") return LearnerKind::svm;
  throw Error(ErrorCode::validation, "unknown learner '" + std::string(name) +
                                         "' (expected lr, gbm, adaboost, mlp, nb or svm)");
}

LearnerSpec LearnerSpec::defaults(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::logistic: return {LogisticConfig{}};
    case LearnerKind::gbm: return {GbmConfig{}};
    case LearnerKind::adaboost: return {AdaBoostConfig{}};
    case LearnerKind::mlp: return {MlpConfig{}};
    case LearnerKind::naive_bayes: return {NaiveBayesConfig{}};
    case LearnerKind::svm: return {SvmConfig{}};
  }
  return {LogisticConfig{}};
}

LearnerSpec LearnerSpec::with_params(LearnerKind kind, const std::map<std::string, std::string>& params) {
  LearnerSpec spec = defaults(kind);
  for (const auto& [key, value] : params) {
    bool known = std::visit(
        overloaded{
            [&](LogisticConfig& c) {
              if (key == "l2") c.l2 = parse_double(key, value);
              else if (key == "max_iters") c.max_iters = parse_size(key, value);
              else if (key == "step") c.step = parse_double(key, value);
              else return false;
              return true;
            },
            [&](GbmConfig& c) {
              if (key == "eta") c.eta = parse_double(key, value);
              else if (key == "n_iters") c.n_iters = parse_size(key, value);
              else if (key == "max_depth") c.max_depth = parse_size(key, value);
              else if (key == "min_leaf") c.min_leaf = parse_size(key, value);
              else if (key == "max_bins") c.max_bins = parse_size(key, value);
              else return false;
              return true;
            },
            [&](AdaBoostConfig& c) {
              if (key == "rounds") c.rounds = parse_size(key, value);
              else if (key == "stump_depth") c.stump_depth = parse_size(key, value);
              else if (key == "max_bins") c.max_bins = parse_size(key, value);
              else return false;
              return true;
            },
            [&](MlpConfig& c) {
              if (key == "hidden_sizes") c.hidden_sizes = parse_sizes(key, value);
              else if (key == "step") c.step = parse_double(key, value);
              else if (key == "epochs") c.epochs = parse_size(key, value);
              else if (key == "batch") c.batch = parse_size(key, value);
              else return false;
              return true;
            },
            [&](NaiveBayesConfig& c) {
              if (key == "alpha") c.alpha = parse_double(key, value);
              else return false;
              return true;
            },
            [&](SvmConfig& c) {
              if (key == "lambda") c.lambda = parse_double(key, value);
              else if (key == "epochs") c.epochs = parse_size(key, value);
              else return false;
              return true;
            },
        },
        spec.config);
    if (!known) {
      throw Error(ErrorCode::validation,
                  "unknown parameter '" + key + "' for learner " + std::string(kind_name(kind)));
    }
  }
  return spec;
}

std::string LearnerSpec::fingerprint() const { return detail::spec_to_json(*this).dump(); }

LearnerKind kind_of(const LearnerModel& model) noexcept { return static_cast<LearnerKind>(model.index()); }

std::size_t model_classes(const LearnerModel& model) noexcept {
  return std::visit([](const auto& m) { return m.classes; }, model);
}

std::size_t model_dim(const LearnerModel& model) noexcept {
  return std::visit([](const auto& m) { return m.dim; }, model);
}

LearnerModel train(const LearnerSpec& spec, const FeatureMatrix& x, Labels y, std::size_t classes,
                   std::uint64_t seed) {
  return std::visit(
      overloaded{
          [&](const LogisticConfig& c) -> LearnerModel { return train_logistic(x, y, classes, c); },
          [&](const GbmConfig& c) -> LearnerModel { return train_gbm(x, y, classes, c); },
          [&](const AdaBoostConfig& c) -> LearnerModel { return train_adaboost(x, y, classes, c); },
          [&](const MlpConfig& c) -> LearnerModel { return train_mlp(x, y, classes, c, seed); },
          [&](const NaiveBayesConfig& c) -> LearnerModel { return train_naive_bayes(x, y, classes, c); },
          [&](const SvmConfig& c) -> LearnerModel { return train_svm(x, y, classes, c, seed); },
      },
      spec.config);
}

DenseMatrix predict_proba(const LearnerModel& model, const FeatureMatrix& x) {
  return std::visit([&](const auto& m) { return predict_proba(m, x); }, model);
}

std::vector<std::size_t> predict_label(const LearnerModel& model, const FeatureMatrix& x) {
  return argmax_rows(predict_proba(model, x));
}

// ---------------------------------------------------------------- JSON

namespace detail {

Json spec_to_json(const LearnerSpec& spec) {
  Json j;
  j["kind"] = kind_name(spec.kind());
  std::visit(overloaded{
                 [&](const LogisticConfig& c) {
                   j["l2"] = c.l2;
                   j["max_iters"] = c.max_iters;
                   j["step"] = c.step;
                 },
                 [&](const GbmConfig& c) {
                   j["eta"] = c.eta;
                   j["n_iters"] = c.n_iters;
                   j["max_depth"] = c.max_depth;
                   j["min_leaf"] = c.min_leaf;
                   j["max_bins"] = c.max_bins;
                 },
                 [&](const AdaBoostConfig& c) {
                   j["rounds"] = c.rounds;
                   j["stump_depth"] = c.stump_depth;
                   j["max_bins"] = c.max_bins;
                 },
                 [&](const MlpConfig& c) {
                   j["hidden_sizes"] = c.hidden_sizes;
                   j["step"] = c.step;
                   j["epochs"] = c.epochs;
                   j["batch"] = c.batch;
                 },
                 [&](const NaiveBayesConfig& c) { j["alpha"] = c.alpha; },
                 [&](const SvmConfig& c) {
                   j["lambda"] = c.lambda;
                   j["epochs"] = c.epochs;
                 },
             },
             spec.config);
  return j;
}

LearnerSpec spec_from_json(const nlohmann::json& j) {
  std::map<std::string, std::string> params;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += std::to_string(v.get<std::size_t>());
      }
      params[key] = joined;
    } else {
      params[key] = value.dump();
    }
  }
  return LearnerSpec::with_params(parse_learner_kind(j.at("kind").get<std::string>()), params);
}

Json model_to_json(const LearnerModel& model) {
  Json j;
  j["format"] = kModelFormat;
  j["kind"] = kind_name(kind_of(model));
  j["classes"] = model_classes(model);
  j["dim"] = model_dim(model);
  std::visit(overloaded{
                 [&](const LogisticModel& m) {
                   j["weights"] = matrix_json(m.weights);
                   j["bias"] = m.bias;
                 },
                 [&](const GbmModel& m) {
                   j["eta"] = m.eta;
                   j["max_depth"] = m.max_depth;
                   j["min_leaf"] = m.min_leaf;
                   j["init_scores"] = m.init_scores;
                   Json trees = Json::array();
                   for (const auto& t : m.trees) trees.push_back(tree_json(t));
                   j["trees"] = std::move(trees);
                 },
                 [&](const AdaBoostModel& m) {
                   j["alphas"] = m.alphas;
                   j["priors"] = m.priors;
                   Json trees = Json::array();
                   for (const auto& t : m.weak_classifiers) trees.push_back(tree_json(t));
                   j["weak_classifiers"] = std::move(trees);
                 },
                 [&](const MlpModel& m) {
                   Json layers = Json::array();
                   for (const auto& l : m.layers) {
                     layers.push_back(Json{{"activation", l.activation == Activation::relu ? "relu" : "softmax"},
                                           {"weights", matrix_json(l.weights)},
                                           {"bias", l.bias}});
                   }
                   j["layers"] = std::move(layers);
                 },
                 [&](const NaiveBayesModel& m) {
                   j["alpha"] = m.alpha;
                   j["log_prior"] = m.log_prior;
                   j["log_likelihood"] = matrix_json(m.log_likelihood);
                 },
                 [&](const SvmModel& m) {
                   j["lambda"] = m.lambda;
                   j["weights"] = matrix_json(m.weights);
                   j["bias"] = m.bias;
                 },
             },
             model);
  return j;
}

LearnerModel model_from_json(const nlohmann::json& j) {
  if (j.at("format").get<int>() != kModelFormat) {
    throw Error(ErrorCode::format, "unsupported model format " + j.at("format").dump());
  }
  const LearnerKind kind = parse_learner_kind(j.at("kind").get<std::string>());
  const auto classes = j.at("classes").get<std::size_t>();
  const auto dim = j.at("dim").get<std::size_t>();
  switch (kind) {
    case LearnerKind::logistic:
      return LogisticModel{classes, dim, matrix_from(j.at("weights")), j.at("bias").get<std::vector<double>>()};
    case LearnerKind::gbm: {
      GbmModel m;
      m.classes = classes;
      m.dim = dim;
      m.eta = j.at("eta").get<double>();
      m.max_depth = j.at("max_depth").get<std::size_t>();
      m.min_leaf = j.at("min_leaf").get<std::size_t>();
      m.init_scores = j.at("init_scores").get<std::vector<double>>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
      return m;
    }
    case LearnerKind::adaboost: {
      AdaBoostModel m;
      m.classes = classes;
      m.dim = dim;
      m.alphas = j.at("alphas").get<std::vector<double>>();
      m.priors = j.at("priors").get<std::vector<double>>();
      for (const auto& t : j.at("weak_classifiers")) m.weak_classifiers.push_back(tree_from(t));
      if (m.alphas.size() != m.weak_classifiers.size()) throw Error(ErrorCode::format, "adaboost: alpha count mismatch");
      return m;
    }
    case LearnerKind::mlp: {
      MlpModel m;
      m.classes = classes;
      m.dim = dim;
      for (const auto& l : j.at("layers")) {
        m.layers.push_back(DenseLayer{matrix_from(l.at("weights")), l.at("bias").get<std::vector<double>>(),
                                      l.at("activation").get<std::string>() == "relu" ? Activation::relu
                                                                                       : Activation::softmax});
      }
      return m;
    }
    case LearnerKind::naive_bayes:
      return NaiveBayesModel{classes, dim, j.at("alpha").get<double>(), j.at("log_prior").get<std::vector<double>>(),
                             matrix_from(j.at("log_likelihood"))};
    case LearnerKind::svm:
      return SvmModel{classes, dim, j.at("lambda").get<double>(), matrix_from(j.at("weights")),
                      j.at("bias").get<std::vector<double>>()};
  }
  throw Error(ErrorCode::format, "unknown model kind");
}

}  // namespace detail

std::string to_json(const LearnerModel& model) { return detail::model_to_json(model).dump(); }

LearnerModel learner_from_json(std::string_view json) {
  try {
    return detail::model_from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, std::string("model document: ") + e.what());
  }
}

}  // namespace sevstack
