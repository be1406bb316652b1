#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sevstack/error.hpp"
#include "sevstack/text.hpp"

namespace sevstack::cli {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::validation, what); }

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = text::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string s = text::fold_case(text::trim(v));
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  invalid("'" + key + "' expects a boolean, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  const std::string s = text::trim(v);
  T out{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    invalid("'" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

Pipeline parse_pipeline(const std::string& v) {
  if (v == "tfidf") return Pipeline::tfidf;
  if (v == "embeddings") return Pipeline::embeddings;
  invalid("pipeline must be tfidf or embeddings, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
  std::filesystem::path p(text::trim(v));
  return p.is_absolute() || base.empty() ? p : (base / p).lexically_normal();
}

pt::ptree read(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    invalid("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

// Visits every key of a section, rejecting keys outside `allowed`.
template <class F>
void each_key(const std::string& section, const pt::ptree& node, const std::set<std::string>& allowed, F&& f) {
  for (const auto& [key, child] : node) {
    if (!allowed.empty() && !allowed.contains(key)) invalid("unknown key '" + key + "' in [" + section + "]");
    f(key, text::trim(child.data()));
  }
}

void parse_run_section(const pt::ptree& node, RunConfig& c, const std::filesystem::path& base) {
  each_key("run", node, {"seed", "out", "threads"}, [&](const std::string& k, const std::string& v) {
    if (k == "seed") c.seed = parse_number<std::uint64_t>(k, v);
    if (k == "out") c.out = resolve(base, v);
    if (k == "threads") c.threads = parse_number<std::size_t>(k, v);
  });
}

DataConfig parse_data_section(const std::string& section, const pt::ptree& node, const std::filesystem::path& base) {
  DataConfig d;
  each_key(section, node,
           {"name", "train", "test", "eval_split", "split", "scheme", "id_column", "text_column", "label_column",
            "delimiter", "dedup", "embeddings"},
           [&](const std::string& k, const std::string& v) {
             if (k == "name") d.name = v;
             if (k == "train") d.train = resolve(base, v);
             if (k == "test") d.test = resolve(base, v);
             if (k == "eval_split") {
               if (v == "test") d.eval_tag = SplitTag::test;
               else if (v == "dev") d.eval_tag = SplitTag::dev;
               else invalid("eval_split must be test or dev, got '" + v + "'");
             }
             if (k == "split") d.split = parse_number<double>(k, v);
             if (k == "scheme") d.scheme = v;
             if (k == "id_column") d.columns.id = v;
             if (k == "text_column") d.columns.text = v;
             if (k == "label_column") d.columns.label = v;
             if (k == "delimiter") {
               if (v == "tab" || v == "\\t") d.delimiter = '\t';
               else if (v.size() == 1) d.delimiter = v[0];
               else invalid("delimiter must be one character or 'tab', got '" + v + "'");
             }
             if (k == "dedup") d.dedup = parse_bool(k, v);
             if (k == "embeddings") d.embeddings = resolve(base, v);
           });
  return d;
}

void parse_features_section(const pt::ptree& node, FeatureConfig& f, const std::filesystem::path& base) {
  each_key("features", node, {"pipeline", "sentiment", "lexicon", "min_df"},
           [&](const std::string& k, const std::string& v) {
             if (k == "pipeline") f.pipeline = parse_pipeline(v);
             if (k == "sentiment") f.sentiment = parse_bool(k, v);
             if (k == "lexicon") f.lexicon = resolve(base, v);
             if (k == "min_df") f.min_df = parse_number<std::size_t>(k, v);
           });
}

void parse_model_sections(const pt::ptree& tree, ModelConfig& m) {
  for (const auto& [section, node] : tree) {
    if (section == "model") {
      each_key(section, node, {"learner"}, [&](const std::string&, const std::string& v) { m.learner = v; });
    } else if (section == "stack") {
      each_key(section, node, {"bases", "meta", "folds"}, [&](const std::string& k, const std::string& v) {
        if (k == "bases") m.bases = split_list(v);
        if (k == "meta") m.meta = v;
        if (k == "folds") m.folds = parse_number<std::size_t>(k, v);
      });
    } else if (section.starts_with("params.")) {
      const std::string name(kind_name(parse_learner_kind(section.substr(7))));
      each_key(section, node, {}, [&](const std::string& k, const std::string& v) { m.params[name][k] = v; });
    }
  }
}

void reject_unknown_sections(const pt::ptree& tree, const std::set<std::string>& allowed, bool datasets) {
  for (const auto& [section, node] : tree) {
    if (node.data().size() > 0 && node.empty()) invalid("key '" + section + "' outside any section");
    if (allowed.contains(section) || section.starts_with("params.")) continue;
    if (datasets && section.starts_with("dataset.")) continue;
    invalid("unknown section [" + section + "]");
  }
}

}  // namespace

std::string_view to_string(Pipeline p) noexcept { return p == Pipeline::tfidf ? "tfidf" : "embeddings"; }

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  const pt::ptree tree = read(text);
  reject_unknown_sections(tree, {"run", "data", "features", "model", "stack"}, false);
  RunConfig c;
  if (const auto run = tree.get_child_optional("run")) parse_run_section(*run, c, base_dir);
  const auto data = tree.get_child_optional("data");
  if (!data) invalid("config lacks a [data] section");
  c.data = parse_data_section("data", *data, base_dir);
  if (const auto f = tree.get_child_optional("features")) parse_features_section(*f, c.features, base_dir);
  parse_model_sections(tree, c.model);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path), path.parent_path());
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir) {
  const pt::ptree tree = read(text);
  reject_unknown_sections(tree, {"run", "experiment", "features", "stack"}, true);
  ExperimentConfig e;
  if (const auto run = tree.get_child_optional("run")) parse_run_section(*run, e.run, base_dir);
  if (const auto f = tree.get_child_optional("features")) parse_features_section(*f, e.run.features, base_dir);
  parse_model_sections(tree, e.run.model);
  std::map<std::string, DataConfig> declared;
  for (const auto& [section, node] : tree) {
    if (!section.starts_with("dataset.")) continue;
    DataConfig d = parse_data_section(section, node, base_dir);
    d.name = section.substr(8);
    declared[d.name] = d;
  }
  const auto grid = tree.get_child_optional("experiment");
  if (!grid) invalid("experiment config lacks an [experiment] section");
  std::vector<std::string> datasets{}, pipelines{"tfidf"}, sentiment{"off"};
  each_key("experiment", *grid, {"datasets", "pipelines", "learners", "sentiment"},
           [&](const std::string& k, const std::string& v) {
             if (k == "datasets") datasets = split_list(v);
             if (k == "pipelines") pipelines = split_list(v);
             if (k == "learners") e.learners = split_list(v);
             if (k == "sentiment") sentiment = split_list(v);
           });
  if (datasets.empty()) {
    for (const auto& [name, d] : declared) datasets.push_back(name);
  }
  for (const auto& name : datasets) {
    const auto it = declared.find(name);
    if (it == declared.end()) invalid("experiment names dataset '" + name + "' without a [dataset." + name + "] section");
    e.datasets.push_back(it->second);
  }
  for (const auto& p : pipelines) e.pipelines.push_back(parse_pipeline(p));
  for (const auto& s : sentiment) e.sentiment.push_back(parse_bool("sentiment", s));
  if (e.datasets.empty() || e.pipelines.empty() || e.learners.empty() || e.sentiment.empty()) {
    invalid("experiment grid needs at least one dataset, pipeline, learner and sentiment setting");
  }
  return e;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path), path.parent_path());
}

LearnerSpec learner_spec(const ModelConfig& model, const std::string& name) {
  const LearnerKind kind = [&] {
    try {
      return parse_learner_kind(name);
    } catch (const Error&) {
      invalid("unknown learner '" + name + "' (expected lr, gbm, adaboost, mlp, nb, svm or stack)");
    }
  }();
  const auto it = model.params.find(std::string(kind_name(kind)));
  return it == model.params.end() ? LearnerSpec::defaults(kind) : LearnerSpec::with_params(kind, it->second);
}

StackingConfig stacking_config(const ModelConfig& model, std::uint64_t seed, std::size_t threads) {
  StackingConfig c;
  for (const auto& b : model.bases) c.bases.push_back(learner_spec(model, b));
  c.meta = learner_spec(model, model.meta);
  c.folds = model.folds;
  c.seed = seed;
  c.threads = threads;
  c.validate();
  return c;
}

void validate(const RunConfig& c) {
  const auto& d = c.data;
  if (d.train.empty()) invalid("[data] needs a train file");
  (void)LabelScheme::parse(d.scheme);
  if (!d.test && !(d.split > 0 && d.split < 1)) invalid("split must lie in (0, 1)");
  if (c.features.min_df < 1) invalid("min_df must be >= 1");
  if (c.model.learner == "stack") {
    (void)stacking_config(c.model, c.seed, c.threads);
  } else {
    (void)learner_spec(c.model, c.model.learner);
  }
  const bool signed_features = c.features.sentiment || c.features.pipeline == Pipeline::embeddings;
  const auto& feature_learners = c.model.learner == "stack" ? c.model.bases : std::vector<std::string>{c.model.learner};
  for (const auto& name : feature_learners) {
    if (signed_features && parse_learner_kind(name) == LearnerKind::naive_bayes) {
      invalid("nb needs nonnegative features; use tfidf without sentiment");
    }
  }
  for (const auto& [name, params] : c.model.params) (void)LearnerSpec::with_params(parse_learner_kind(name), params);

  auto require = [](const std::filesystem::path& p, const std::string& what) {
    if (!std::filesystem::exists(p)) throw Error(ErrorCode::missing_artifact, what + " '" + p.string() + "' does not exist");
  };
  require(d.train, "train file");
  if (d.test) require(*d.test, "test file");
  if (c.features.pipeline == Pipeline::embeddings) {
    if (!d.embeddings) invalid("the embeddings pipeline needs 'embeddings' in the data section");
    require(*d.embeddings, "embedding table");
  }
  if (c.features.sentiment && c.features.lexicon) require(*c.features.lexicon, "lexicon");
}

std::string canonical(const DataConfig& d, std::uint64_t seed) {
  std::ostringstream s;
  s << "name=" << d.name << "\ntrain=" << d.train.string() << "\ntest=" << (d.test ? d.test->string() : "")
    << "\neval_split=" << to_string(d.eval_tag) << "\nscheme=" << d.scheme << "\nid_column=" << d.columns.id
    << "\ntext_column=" << d.columns.text << "\nlabel_column=" << d.columns.label.value_or("")
    << "\ndelimiter=" << static_cast<int>(d.delimiter) << "\ndedup=" << d.dedup;
  if (!d.test) s << "\nsplit=" << d.split << "\nseed=" << seed;
  return s.str();
}

std::string canonical(const FeatureConfig& f) {
  std::ostringstream s;
  s << "pipeline=" << to_string(f.pipeline) << "\nsentiment=" << f.sentiment
    << "\nlexicon=" << (f.lexicon ? f.lexicon->string() : "") << "\nmin_df=" << f.min_df;
  return s.str();
}

std::string canonical(const ModelConfig& m, std::uint64_t seed) {
  std::ostringstream s;
  s << "seed=" << seed << "\n";
  if (m.learner == "stack") {
    const StackingConfig c = stacking_config(m, seed, 0);
    s << "learner=stack\nfolds=" << c.folds << "\nmeta=" << c.meta.fingerprint() << "\n";
    for (const auto& b : c.bases) s << "base=" << b.fingerprint() << "\n";
  } else {
    s << "learner=" << learner_spec(m, m.learner).fingerprint() << "\n";
  }
  return s.str();
}

}  // namespace sevstack::cli
