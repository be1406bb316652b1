#include "pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <unordered_map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sevstack/error.hpp"
#include "sevstack/parallel.hpp"
#include "sevstack/random.hpp"
#include "sevstack/vectorize.hpp"

namespace sevstack::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string slug(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  return out.empty() ? "run" : out;
}

void require(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorCode::missing_artifact, "missing upstream artifact '" + p.string() + "'");
  }
}

void wrote(std::ostream& log, const std::filesystem::path& p) { log << "wrote " << p.string() << '\n'; }

Corpus load_input(const DataConfig& d, const std::filesystem::path& file, const LabelScheme& scheme) {
  if (file.extension() == ".jsonl") return read_jsonl(file, scheme);
  return load_table(file, d.columns, scheme, d.delimiter);
}

Corpus read_corpus(const std::filesystem::path& p, const LabelScheme& scheme, SplitTag tag) {
  require(p);
  return read_jsonl(p, scheme, tag);
}

FeatureMatrix read_features(const std::filesystem::path& p) {
  require(p);
  return read_feature_matrix(p);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed) { return Rng(seed).fork({0x5b1e}).key(); }
std::uint64_t training_seed(std::uint64_t seed) { return Rng(seed).fork({0x7a1a}).key(); }

Layout layout(const RunConfig& c) {
  const std::string data = canonical(c.data, c.seed);
  const std::string features = data + "\n" + canonical(c.features);
  const std::string model = features + "\n" + canonical(c.model, c.seed);
  Layout l;
  l.corpus_dir = c.out / "corpus" / (slug(c.data.name) + "-" + hex16(fnv1a64(data)));
  l.features_dir = c.out / "features" /
                   (std::string(to_string(c.features.pipeline)) + (c.features.sentiment ? "-afinn-" : "-") +
                    hex16(fnv1a64(features)));
  const std::string model_id = slug(c.model.learner) + "-" + hex16(fnv1a64(model));
  l.model_dir = c.out / "models" / model_id;
  l.report_dir = c.out / "reports" / model_id;
  return l;
}

std::string model_display_name(const ModelConfig& m) {
  if (m.learner == "stack") return "Ensemble";
  switch (parse_learner_kind(m.learner)) {
    case LearnerKind::logistic: return "LR";
    case LearnerKind::gbm: return "GBM";
    case LearnerKind::adaboost: return "AdaBoost";
    case LearnerKind::mlp: return "MLP";
    case LearnerKind::naive_bayes: return "NB";
    case LearnerKind::svm: return "SVM";
  }
  return m.learner;
}

std::string feature_display_name(const FeatureConfig& f) {
  return std::string(f.pipeline == Pipeline::tfidf ? "TF-IDF" : "Embeddings") + (f.sentiment ? "+AFINN" : "");
}

std::string to_json(const ModelArtifact& a) {
  Json j;
  j["format"] = 1;
  j["name"] = a.name;
  j["classes"] = a.classes;
  if (const auto* single = std::get_if<LearnerModel>(&a.model)) {
    j["kind"] = "learner";
    j["model"] = Json::parse(sevstack::to_json(*single));
  } else {
    j["kind"] = "stacking";
    j["model"] = Json::parse(sevstack::to_json(std::get<StackingModel>(a.model)));
  }
  return j.dump() + "\n";
}

ModelArtifact parse_model_artifact(std::string_view json, std::string_view source) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("format").get<int>() != 1) throw Error(ErrorCode::format, std::string(source) + ": unsupported model file format");
    ModelArtifact a;
    a.name = j.at("name").get<std::string>();
    a.classes = j.at("classes").get<std::vector<std::string>>();
    const std::string kind = j.at("kind").get<std::string>();
    const std::string inner = j.at("model").dump();
    if (kind == "learner") {
      a.model = learner_from_json(inner);
    } else if (kind == "stacking") {
      a.model = stacking_from_json(inner);
    } else {
      throw Error(ErrorCode::format, std::string(source) + ": unknown model kind '" + kind + "'");
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, std::string(source) + ": " + e.what());
  }
}

ModelArtifact read_model_artifact(const std::filesystem::path& path) {
  require(path);
  return parse_model_artifact(read_file(path), path.string());
}

DenseMatrix predict_proba(const ModelArtifact& a, const FeatureMatrix& x) {
  if (const auto* single = std::get_if<LearnerModel>(&a.model)) return sevstack::predict_proba(*single, x);
  return predict_stacking(std::get<StackingModel>(a.model), x);
}

std::string predictions_jsonl(const FeatureMatrix& x, const DenseMatrix& proba, const std::vector<std::string>& classes) {
  std::string out;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    Json j;
    j["id"] = x.row_ids()[r];
    j["label"] = classes.at(argmax(proba.row(r)));
    j["proba"] = std::vector<double>(proba.row(r).begin(), proba.row(r).end());
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<Prediction> parse_predictions(std::string_view content, std::string_view source) {
  std::vector<Prediction> out;
  std::size_t line_no = 0, start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("id").get<std::string>(), j.at("label").get<std::string>(),
                     j.at("proba").get<std::vector<double>>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse, std::string(source) + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Document> read_documents(const std::filesystem::path& path, const ColumnMapping& columns, char delimiter) {
  if (path.extension() != ".jsonl") {
    ColumnMapping m = columns;
    m.label.reset();
    return load_table(path, m, LabelScheme({"_"}), delimiter).documents();
  }
  std::vector<Document> docs;
  const std::string content = read_file(path);
  std::size_t line_no = 0, start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      docs.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>(), std::nullopt});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse, path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::string sentiment_jsonl(const std::vector<Document>& docs, const Lexicon& lexicon) {
  std::string out;
  for (const auto& d : docs) {
    const SentimentResult r = score_document(tokenize(d.text), lexicon);
    Json j;
    j["id"] = d.id;
    j["score"] = r.score;
    j["polarity"] = to_string(r.polarity);
    j["matched"] = r.matched;
    out += j.dump() + "\n";
  }
  return out;
}

Lexicon load_configured_lexicon(const std::optional<std::filesystem::path>& path) {
  if (!path) return load_bundled_lexicon();
  return load_lexicon(*path, ZeroScore::tally_negative);
}

void stage_prepare(const RunConfig& c, const Layout& paths, std::ostream& log) {
  const LabelScheme scheme = LabelScheme::parse(c.data.scheme);
  Corpus train = load_input(c.data, c.data.train, scheme);
  if (c.data.dedup) train = deduplicate(train);
  Corpus eval = train;
  if (c.data.test) {
    train = train.with_tag(SplitTag::train);
    eval = load_input(c.data, *c.data.test, scheme);
    if (c.data.dedup) eval = deduplicate(eval);
    eval = eval.with_tag(c.data.eval_tag);
  } else {
    auto parts = stratified_split(train, c.data.split, split_seed(c.seed));
    train = std::move(parts.first);
    eval = std::move(parts.second);
  }
  write_jsonl(train, paths.train_corpus());
  wrote(log, paths.train_corpus());
  write_jsonl(eval, paths.eval_corpus());
  wrote(log, paths.eval_corpus());
}

void stage_featurize(const RunConfig& c, const Layout& paths, std::ostream& log) {
  const LabelScheme scheme = LabelScheme::parse(c.data.scheme);
  const Corpus train = read_corpus(paths.train_corpus(), scheme, SplitTag::train);
  const Corpus eval = read_corpus(paths.eval_corpus(), scheme, c.data.eval_tag);
  FeatureMatrix xt, xe;
  if (c.features.pipeline == Pipeline::tfidf) {
    const TfidfVocabulary vocab = fit_tfidf(train, c.features.min_df);
    write_file(paths.vocabulary(), vocab.to_json() + "\n");
    wrote(log, paths.vocabulary());
    xt = transform_tfidf(train, vocab);
    xe = transform_tfidf(eval, vocab);
  } else {
    if (!c.data.embeddings) throw Error(ErrorCode::validation, "the embeddings pipeline needs an embedding table");
    require(*c.data.embeddings);
    const EmbeddingTable table = read_embedding_table(*c.data.embeddings);
    xt = embed_corpus(train, table);
    xe = embed_corpus(eval, table);
  }
  if (c.features.sentiment) {
    const Lexicon lexicon = load_configured_lexicon(c.features.lexicon);
    xt = fuse_features(xt, sentiment_blocks(train, lexicon), true);
    xe = fuse_features(xe, sentiment_blocks(eval, lexicon), true);
  }
  write_feature_matrix(xt, paths.train_features());
  wrote(log, paths.train_features());
  write_feature_matrix(xe, paths.eval_features());
  wrote(log, paths.eval_features());
}

void stage_train(const RunConfig& c, const Layout& paths, std::ostream& log) {
  const LabelScheme scheme = LabelScheme::parse(c.data.scheme);
  const Corpus corpus = read_corpus(paths.train_corpus(), scheme, SplitTag::train);
  const FeatureMatrix x = read_features(paths.train_features());
  if (x.row_ids() != corpus.ids()) {
    throw Error(ErrorCode::join, "features '" + paths.train_features().string() + "' do not match corpus '" +
                                     paths.train_corpus().string() + "'");
  }
  const auto y = corpus.labels();
  ModelArtifact a;
  a.classes = scheme.names();
  a.name = model_display_name(c.model);
  const std::uint64_t seed = training_seed(c.seed);
  if (c.model.learner == "stack") {
    a.model = fit_stacking(x, y, scheme.size(), stacking_config(c.model, seed, c.threads));
  } else {
    a.model = train(learner_spec(c.model, c.model.learner), x, y, scheme.size(), seed);
  }
  write_file(paths.model(), to_json(a));
  wrote(log, paths.model());
}

void stage_predict(const RunConfig&, const Layout& paths, std::ostream& log) {
  const ModelArtifact a = read_model_artifact(paths.model());
  const FeatureMatrix x = read_features(paths.eval_features());
  write_file(paths.predictions(), predictions_jsonl(x, predict_proba(a, x), a.classes));
  wrote(log, paths.predictions());
}

EvalReport evaluate_predictions(const Corpus& gold, const std::vector<Prediction>& predictions, RunMetadata run) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions) by_id[p.id] = &p;
  std::vector<std::size_t> pred;
  for (const auto& d : gold.documents()) {
    const auto it = by_id.find(d.id);
    if (it == by_id.end()) throw Error(ErrorCode::join, "no prediction for document '" + d.id + "'");
    const auto label = gold.scheme().find(it->second->label);
    if (!label) throw Error(ErrorCode::label, "prediction for '" + d.id + "' has unknown label '" + it->second->label + "'");
    pred.push_back(*label);
  }
  return make_report(gold, pred, std::move(run));
}

EvalReport stage_evaluate(const RunConfig& c, const Layout& paths, std::ostream& log) {
  const LabelScheme scheme = LabelScheme::parse(c.data.scheme);
  const Corpus gold = read_corpus(paths.eval_corpus(), scheme, c.data.eval_tag);
  require(paths.predictions());
  const auto predictions = parse_predictions(read_file(paths.predictions()), paths.predictions().string());
  EvalReport r = evaluate_predictions(
      gold, predictions, {c.data.name, feature_display_name(c.features), model_display_name(c.model), c.seed});
  write_report(r, paths.report_prefix());
  wrote(log, paths.report_prefix().string() + ".json");
  wrote(log, paths.report_prefix().string() + ".txt");
  return r;
}

}  // namespace sevstack::cli

namespace sevstack::cli {

std::vector<ExperimentCell> expand(const ExperimentConfig& e) {
  std::vector<ExperimentCell> cells;
  for (Pipeline p : e.pipelines) {
    for (bool s : e.sentiment) {
      for (const auto& learner : e.learners) {
        for (const auto& d : e.datasets) {
          RunConfig c = e.run;
          c.data = d;
          c.features.pipeline = p;
          c.features.sentiment = s;
          c.model.learner = learner;
          validate(c);
          cells.push_back({c, layout(c)});
        }
      }
    }
  }
  return cells;
}

ExperimentResult run_experiment(const ExperimentConfig& e, std::ostream& log) {
  const auto cells = expand(e);

  std::vector<std::filesystem::path> prepared, featurized;
  std::string key;
  for (const auto& cell : cells) {
    if (std::find(prepared.begin(), prepared.end(), cell.paths.corpus_dir) == prepared.end()) {
      stage_prepare(cell.config, cell.paths, log);
      prepared.push_back(cell.paths.corpus_dir);
    }
    if (std::find(featurized.begin(), featurized.end(), cell.paths.features_dir) == featurized.end()) {
      stage_featurize(cell.config, cell.paths, log);
      featurized.push_back(cell.paths.features_dir);
    }
    key += cell.paths.report_dir.string() + "\n";
  }

  std::vector<std::ostringstream> logs(cells.size());
  ExperimentResult result;
  result.reports.resize(cells.size());
  parallel_for(
      cells.size(),
      [&](std::size_t i) {
        RunConfig c = cells[i].config;
        c.threads = 1;
        stage_train(c, cells[i].paths, logs[i]);
        stage_predict(c, cells[i].paths, logs[i]);
        result.reports[i] = stage_evaluate(c, cells[i].paths, logs[i]);
      },
      e.run.threads);
  for (const auto& l : logs) log << l.str();

  const std::string stem = "experiment-" + hex16(fnv1a64(key));
  result.table = e.run.out / "reports" / (stem + ".txt");
  result.json = e.run.out / "reports" / (stem + ".json");
  write_file(result.table, render_table(result.reports));
  wrote(log, result.table);
  std::string json = "[\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    json += report_json(result.reports[i]);
    if (i + 1 < result.reports.size()) json.insert(json.size() - 1, ",");
  }
  write_file(result.json, json + "]\n");
  wrote(log, result.json);
  return result;
}

}  // namespace sevstack::cli
