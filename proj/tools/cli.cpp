#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "config.hpp"
#include "pipeline.hpp"
#include "sevstack/error.hpp"
#include "sevstack/vectorize.hpp"

namespace sevstack::cli {

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string input;
  std::string model;
  std::string lexicon;
  std::string embeddings;
  std::string predictions;
  std::string scheme = "d2";
  std::string id_column = "id";
  std::string text_column = "text";
  std::string label_column = "label";
  std::string delimiter = ",";
};

char delimiter_of(const std::string& d) {
  if (d == "tab" || d == "\\t") return '\t';
  if (d.size() != 1) throw Error(ErrorCode::validation, "--delimiter must be one character or 'tab'");
  return d[0];
}

std::optional<std::filesystem::path> lexicon_override(const Options& o) {
  if (!o.lexicon.empty()) return o.lexicon;
  if (const char* env = std::getenv("SEVSTACK_LEXICON"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

RunConfig run_config(const Options& o) {
  if (o.config.empty()) throw Error(ErrorCode::validation, "this command needs --config");
  RunConfig c = load_run_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.out = o.out;
  if (!o.embeddings.empty()) c.data.embeddings = o.embeddings;
  if (!o.lexicon.empty() || !c.features.lexicon) c.features.lexicon = lexicon_override(o);
  validate(c);
  return c;
}

void require_file(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) throw Error(ErrorCode::missing_artifact, "missing input file '" + p.string() + "'");
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
    out << "wrote " << path << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sevstack: depression-severity text classification with sentiment features and stacking"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Run or experiment config file ([section] key = value)");
  app.add_option("--seed", o.seed, "Override the config's top-level seed");
  app.add_option("--out", o.out, "Output root for config runs; output file or prefix for standalone commands");

  auto* prepare = app.add_subcommand("prepare", "Load, deduplicate and split the dataset into corpus/");
  auto* sentiment = app.add_subcommand("sentiment", "Score documents against the AFINN lexicon");
  sentiment->add_option("--input", o.input, "Corpus file (.jsonl, or a delimited table)")->required();
  sentiment->add_option("--lexicon", o.lexicon, "term<TAB>score lexicon (default: $SEVSTACK_LEXICON, else bundled AFINN-111)");
  sentiment->add_option("--id-column", o.id_column, "Id column of a delimited input");
  sentiment->add_option("--text-column", o.text_column, "Text column of a delimited input");
  sentiment->add_option("--delimiter", o.delimiter, "Field delimiter of a delimited input (or 'tab')");
  auto* featurize = app.add_subcommand("featurize", "Build TF-IDF or embedding features into features/");
  featurize->add_option("--embeddings", o.embeddings, "Embedding table (JSON Lines) overriding the config");
  featurize->add_option("--lexicon", o.lexicon, "Lexicon overriding the config");
  auto* train = app.add_subcommand("train", "Train the configured learner or stack into models/");
  auto* predict = app.add_subcommand("predict", "Write class probabilities for the evaluation split");
  predict->add_option("--model", o.model, "Model file (standalone mode, with --input)");
  predict->add_option("--input", o.input, "Feature matrix file (standalone mode)");
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions and write report files into reports/");
  evaluate->add_option("--predictions", o.predictions, "Predictions file (standalone mode, with --input)");
  evaluate->add_option("--input", o.input, "Gold corpus file (standalone mode)");
  evaluate->add_option("--scheme", o.scheme, "Label scheme: d1, d2 or comma-separated class names");
  evaluate->add_option("--id-column", o.id_column, "Id column of a delimited gold file");
  evaluate->add_option("--text-column", o.text_column, "Text column of a delimited gold file");
  evaluate->add_option("--label-column", o.label_column, "Label column of a delimited gold file");
  evaluate->add_option("--delimiter", o.delimiter, "Field delimiter of a delimited gold file (or 'tab')");
  auto* run = app.add_subcommand("run", "prepare, featurize, train, predict and evaluate in one go");
  run->add_option("--embeddings", o.embeddings, "Embedding table overriding the config");
  run->add_option("--lexicon", o.lexicon, "Lexicon overriding the config");
  auto* experiment = app.add_subcommand("experiment", "Run a grid of datasets x features x learners");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "E_USAGE: " << msg << '\n';
    return 2;
  }

  try {
    if (prepare->parsed()) {
      const RunConfig c = run_config(o);
      stage_prepare(c, layout(c), out);
    } else if (sentiment->parsed()) {
      require_file(o.input);
      if (const auto lex = lexicon_override(o)) require_file(*lex);
      ColumnMapping m{o.id_column, o.text_column, std::nullopt};
      const auto docs = read_documents(o.input, m, delimiter_of(o.delimiter));
      const Lexicon lexicon = load_configured_lexicon(lexicon_override(o));
      emit(sentiment_jsonl(docs, lexicon), o.out, out);
    } else if (featurize->parsed()) {
      const RunConfig c = run_config(o);
      stage_featurize(c, layout(c), out);
    } else if (train->parsed()) {
      const RunConfig c = run_config(o);
      stage_train(c, layout(c), out);
    } else if (predict->parsed()) {
      if (!o.model.empty() || !o.input.empty()) {
        if (o.model.empty() || o.input.empty()) throw Error(ErrorCode::validation, "predict needs both --model and --input");
        require_file(o.model);
        const ModelArtifact a = read_model_artifact(o.model);
        require_file(o.input);
        const FeatureMatrix x = read_feature_matrix(o.input);
        emit(predictions_jsonl(x, predict_proba(a, x), a.classes), o.out, out);
      } else {
        const RunConfig c = run_config(o);
        stage_predict(c, layout(c), out);
      }
    } else if (evaluate->parsed()) {
      if (!o.predictions.empty() || !o.input.empty()) {
        if (o.predictions.empty() || o.input.empty()) {
          throw Error(ErrorCode::validation, "evaluate needs both --predictions and --input");
        }
        require_file(o.predictions);
        require_file(o.input);
        const LabelScheme scheme = LabelScheme::parse(o.scheme);
        const std::filesystem::path gold_path(o.input);
        const Corpus gold = gold_path.extension() == ".jsonl"
                                ? read_jsonl(gold_path, scheme)
                                : load_table(gold_path, {o.id_column, o.text_column, o.label_column}, scheme,
                                             delimiter_of(o.delimiter));
        const auto preds = parse_predictions(read_file(o.predictions), o.predictions);
        const EvalReport r = evaluate_predictions(
            gold, preds, {gold_path.stem().string(), "", std::filesystem::path(o.predictions).stem().string(), o.seed.value_or(0)});
        if (o.out.empty()) {
          out << render_table(std::span(&r, 1)) << '\n' << render_detail(r);
        } else {
          write_report(r, o.out);
          out << "wrote " << o.out << ".json\nwrote " << o.out << ".txt\n";
        }
      } else {
        const RunConfig c = run_config(o);
        stage_evaluate(c, layout(c), out);
      }
    } else if (run->parsed()) {
      const RunConfig c = run_config(o);
      const Layout paths = layout(c);
      stage_prepare(c, paths, out);
      stage_featurize(c, paths, out);
      stage_train(c, paths, out);
      stage_predict(c, paths, out);
      const EvalReport r = stage_evaluate(c, paths, out);
      out << '\n' << render_table(std::span(&r, 1));
    } else if (experiment->parsed()) {
      if (o.config.empty()) throw Error(ErrorCode::validation, "experiment needs --config");
      ExperimentConfig e = load_experiment_config(o.config);
      if (o.seed) e.run.seed = *o.seed;
      if (!o.out.empty()) e.run.out = o.out;
      if (!e.run.features.lexicon) e.run.features.lexicon = lexicon_override(o);
      const auto result = run_experiment(e, out);
      out << '\n' << read_file(result.table);
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << code_name(e.code()) << ": " << msg << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "E_INTERNAL: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sevstack::cli
