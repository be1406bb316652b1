#include "sevstack/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include "json.hpp"

#include "sevstack/error.hpp"

namespace sevstack {

std::size_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::support(std::size_t gold) const {
  std::size_t s = 0;
  for (std::size_t p = 0; p < classes_; ++p) s += at(gold, p);
  return s;
}

std::size_t ConfusionMatrix::predicted(std::size_t pred) const {
  std::size_t s = 0;
  for (std::size_t g = 0; g < classes_; ++g) s += at(g, pred);
  return s;
}

ConfusionMatrix confusion(std::span<const std::size_t> gold, std::span<const std::size_t> pred, std::size_t classes) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::contract, "confusion: " + std::to_string(gold.size()) + " gold labels vs " +
                                         std::to_string(pred.size()) + " predictions");
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= classes || pred[i] >= classes) {
      throw Error(ErrorCode::contract, "confusion: index out of range at position " + std::to_string(i));
    }
    cm.add(gold[i], pred[i]);
  }
  return cm;
}

Metrics weighted_metrics(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw Error(ErrorCode::contract, "weighted_metrics: empty confusion matrix");
  const double n = static_cast<double>(total);
  Metrics m;
  std::size_t trace = 0;
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const std::size_t tp = cm.at(c, c);
    const std::size_t support = cm.support(c);
    const std::size_t predicted = cm.predicted(c);
    trace += tp;
    ClassMetrics k;
    k.support = support;
    k.precision_undefined = predicted == 0;
    k.recall_undefined = support == 0;
    k.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
    k.recall = support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(support);
    k.f1 = k.precision + k.recall == 0 ? 0.0 : 2 * k.precision * k.recall / (k.precision + k.recall);
    const double w = static_cast<double>(support) / n;
    m.precision += w * k.precision;
    m.recall += w * k.recall;
    m.f1 += w * k.f1;
    m.per_class.push_back(k);
  }
  m.accuracy = static_cast<double>(trace) / n;
  return m;
}

EvalReport make_report(const Corpus& gold, std::span<const std::size_t> predictions, RunMetadata run) {
  std::vector<std::size_t> y;
  try {
    y = gold.labels();
  } catch (const Error& e) {
    throw Error(ErrorCode::contract, std::string("report: evaluation split lacks gold labels: ") + e.what());
  }
  EvalReport r;
  r.run = std::move(run);
  r.class_names = gold.scheme().names();
  r.matrix = confusion(y, predictions, gold.scheme().size());
  r.metrics = weighted_metrics(r.matrix);
  return r;
}

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["run"] = {{"dataset", report.run.dataset},
              {"features", report.run.features},
              {"model", report.run.model},
              {"seed", report.run.seed}};
  const Metrics& m = report.metrics;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["per_class"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const ClassMetrics& k = m.per_class[c];
    nlohmann::ordered_json e;
    e["class"] = c < report.class_names.size() ? report.class_names[c] : std::to_string(c);
    e["precision"] = k.precision;
    e["recall"] = k.recall;
    e["f1"] = k.f1;
    e["support"] = k.support;
    e["precision_undefined"] = k.precision_undefined;
    e["recall_undefined"] = k.recall_undefined;
    j["per_class"].push_back(std::move(e));
  }
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t g = 0; g < report.matrix.classes(); ++g) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < report.matrix.classes(); ++p) row.push_back(report.matrix.at(g, p));
    rows.push_back(std::move(row));
  }
  j["confusion"] = std::move(rows);
  return j.dump(2) + "\n";
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string render_table(std::span<const EvalReport> reports) {
  std::vector<std::string> datasets;
  std::vector<std::string> rows;
  std::map<std::pair<std::string, std::string>, const EvalReport*> cells;
  for (const auto& r : reports) {
    const std::string row = r.run.features.empty() ? r.run.model : r.run.model + " (" + r.run.features + ")";
    if (std::find(datasets.begin(), datasets.end(), r.run.dataset) == datasets.end()) datasets.push_back(r.run.dataset);
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    cells[{row, r.run.dataset}] = &r;
  }
  std::size_t name_w = 5;
  for (const auto& r : rows) name_w = std::max(name_w, r.size());
  constexpr std::size_t cell_w = 6;
  const std::size_t group_w = 4 * cell_w;

  std::string out = pad("Model", name_w, true);
  for (const auto& d : datasets) out += " |" + pad(d.size() > group_w ? d.substr(0, group_w) : d, group_w, true);
  out += "\n" + std::string(name_w, ' ');
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    out += " |";
    for (const char* h : {"A", "P", "R", "F"}) out += pad(h, cell_w);
  }
  out += "\n" + std::string(name_w, '-');
  for (std::size_t i = 0; i < datasets.size(); ++i) out += "-+" + std::string(group_w, '-');
  out += "\n";
  for (const auto& row : rows) {
    out += pad(row, name_w, true);
    for (const auto& d : datasets) {
      out += " |";
      const auto it = cells.find({row, d});
      if (it == cells.end()) {
        for (int i = 0; i < 4; ++i) out += pad("-", cell_w);
        continue;
      }
      const Metrics& m = it->second->metrics;
      for (double v : {m.accuracy, m.precision, m.recall, m.f1}) out += pad(fixed2(v), cell_w);
    }
    out += "\n";
  }
  return out;
}

std::string render_detail(const EvalReport& report) {
  std::size_t name_w = 5;
  for (const auto& n : report.class_names) name_w = std::max(name_w, n.size());
  std::string out = pad("Class", name_w, true) + pad("P", 8) + pad("R", 8) + pad("F", 8) + pad("Support", 9) + "\n";
  for (std::size_t c = 0; c < report.metrics.per_class.size(); ++c) {
    const ClassMetrics& k = report.metrics.per_class[c];
    std::string flags;
    if (k.precision_undefined) flags += " precision-undefined";
    if (k.recall_undefined) flags += " recall-undefined";
    out += pad(report.class_names.at(c), name_w, true) + pad(fixed2(k.precision), 8) + pad(fixed2(k.recall), 8) +
           pad(fixed2(k.f1), 8) + pad(std::to_string(k.support), 9) + flags + "\n";
  }
  out += "\nConfusion (rows gold, columns predicted)\n";
  for (std::size_t g = 0; g < report.matrix.classes(); ++g) {
    out += pad(report.class_names.at(g), name_w, true);
    for (std::size_t p = 0; p < report.matrix.classes(); ++p) out += pad(std::to_string(report.matrix.at(g, p)), 8);
    out += "\n";
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& prefix) {
  auto json_path = prefix;
  json_path += ".json";
  auto text_path = prefix;
  text_path += ".txt";
  write_file(json_path, report_json(report));
  write_file(text_path, render_table(std::span(&report, 1)) + "\n" + render_detail(report));
}

}  // namespace sevstack
