#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unistd.h>

#include "sevstack/learners/logistic.hpp"
#include "sevstack/learners/mlp.hpp"
#include "sevstack/random.hpp"

namespace sevstack::testing {

Dataset gaussian_blobs(std::size_t per_class, std::size_t classes, double sigma, std::uint64_t seed,
                       std::size_t dim) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> y;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      const double angle = 2 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(classes);
      std::vector<double> row(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        const double center = d == 0 ? 2 * std::cos(angle) : d == 1 ? 2 * std::sin(angle) : 0.0;
        row[d] = center + sigma * rng.normal();
      }
      rows.push_back(std::move(row));
      y.push_back(c);
    }
  }
  return {FeatureMatrix::from_rows(rows), y};
}

Dataset random_problem(std::size_t rows, std::size_t dim, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> x(rows, std::vector<double>(dim));
  for (auto& r : x) {
    for (auto& v : r) v = rng.uniform(-1, 1);
  }
  std::vector<std::size_t> y(rows);
  for (std::size_t i = 0; i < rows; ++i) y[i] = i < classes ? i : static_cast<std::size_t>(rng.below(classes));
  return {FeatureMatrix::from_rows(x), y};
}

Corpus make_corpus(const std::vector<std::string>& texts, const std::vector<std::size_t>& labels,
                   const LabelScheme& scheme) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Document d{"d" + std::to_string(i), texts[i], std::nullopt};
    if (i < labels.size()) d.label = labels[i];
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs), scheme);
}

Corpus make_corpus(const std::vector<std::string>& texts) {
  return make_corpus(texts, {}, LabelScheme({"a", "b"}));
}

std::vector<std::string> random_documents(std::size_t docs, std::size_t vocab, std::size_t max_len,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < docs; ++i) {
    const std::size_t len = rng.below(max_len + 1);
    std::string doc;
    for (std::size_t k = 0; k < len; ++k) {
      if (!doc.empty()) doc += ' ';
      doc += "w" + std::to_string(rng.below(vocab));
    }
    out.push_back(doc);
  }
  return out;
}

TfidfOracle tfidf_oracle(const std::vector<std::string>& documents) {
  std::vector<std::vector<std::string>> split;
  std::set<std::string> vocab;
  for (const auto& d : documents) {
    std::istringstream in(d);
    std::vector<std::string> words;
    for (std::string w; in >> w;) {
      words.push_back(w);
      vocab.insert(w);
    }
    split.push_back(words);
  }
  TfidfOracle o;
  o.terms.assign(vocab.begin(), vocab.end());
  const double n = static_cast<double>(documents.size());
  for (const auto& t : o.terms) {
    double df = 0;
    for (const auto& words : split) {
      bool present = false;
      for (const auto& w : words) present = present || w == t;
      if (present) df += 1;
    }
    o.idf.push_back(std::log((1 + n) / (1 + df)) + 1);
  }
  for (const auto& words : split) {
    std::vector<double> row;
    for (std::size_t j = 0; j < o.terms.size(); ++j) {
      double count = 0;
      for (const auto& w : words) count += w == o.terms[j] ? 1 : 0;
      row.push_back(count * o.idf[j]);
    }
    double norm = 0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& v : row) v /= norm;
    }
    o.rows.push_back(row);
  }
  return o;
}

MetricOracle metric_oracle(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred,
                           std::size_t classes) {
  MetricOracle m;
  const double n = static_cast<double>(gold.size());
  double correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == pred[i];
  m.accuracy = correct / n;
  for (std::size_t c = 0; c < classes; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == c && gold[i] == c) tp += 1;
      if (pred[i] == c && gold[i] != c) fp += 1;
      if (pred[i] != c && gold[i] == c) fn += 1;
    }
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0;
    const double f = p + r > 0 ? 2 * p * r / (p + r) : 0;
    const double w = (tp + fn) / n;
    m.precision += w * p;
    m.recall += w * r;
    m.f1 += w * f;
  }
  return m;
}

double accuracy(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i];
  return gold.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(gold.size());
}

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("sevstack-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace sevstack::testing


namespace sevstack::testing {

namespace {

void track(GradientCheck& g, double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), kGradientFloor});
  g.max_relative_error = std::max(g.max_relative_error, std::abs(analytic - numeric) / denom);
  ++g.parameters;
}

}  // namespace

GradientCheck logistic_gradient_check(const Dataset& data, std::size_t classes, double l2, std::uint64_t seed,
                                      double h) {
  Rng rng(seed);
  LogisticModel p = LogisticModel::zeros(classes, data.x.dim());
  for (auto& w : p.weights.data()) w = rng.uniform(-1, 1);
  for (auto& b : p.bias) b = rng.uniform(-1, 1);
  const auto analytic = logistic_objective(p, data.x, data.y, l2);
  GradientCheck g;
  auto probe = [&](double& param, double grad) {
    const double saved = param;
    param = saved + h;
    const double up = logistic_objective(p, data.x, data.y, l2).loss;
    param = saved - h;
    const double down = logistic_objective(p, data.x, data.y, l2).loss;
    param = saved;
    track(g, grad, (up - down) / (2 * h));
  };
  for (std::size_t i = 0; i < p.weights.data().size(); ++i) probe(p.weights.data()[i], analytic.grad_weights.data()[i]);
  for (std::size_t i = 0; i < p.bias.size(); ++i) probe(p.bias[i], analytic.grad_bias[i]);
  return g;
}

GradientCheck mlp_gradient_check(const Dataset& data, std::size_t classes, const std::vector<std::size_t>& hidden,
                                 std::uint64_t seed, double h) {
  MlpModel m = MlpModel::initialize(data.x.dim(), hidden, classes, seed);
  Rng rng(seed ^ 0xb1a5);
  for (auto& layer : m.layers) {
    for (auto& b : layer.bias) b = rng.uniform(-0.5, 0.5);
  }
  const auto analytic = mlp_loss_and_gradient(m, data.x, data.y);
  GradientCheck g;
  auto probe = [&](double& param, double grad) {
    const double saved = param;
    param = saved + h;
    const double up = mlp_loss_and_gradient(m, data.x, data.y).loss;
    param = saved - h;
    const double down = mlp_loss_and_gradient(m, data.x, data.y).loss;
    param = saved;
    track(g, grad, (up - down) / (2 * h));
  };
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    auto& w = m.layers[l].weights.data();
    for (std::size_t i = 0; i < w.size(); ++i) probe(w[i], analytic.weights[l].data()[i]);
    for (std::size_t i = 0; i < m.layers[l].bias.size(); ++i) probe(m.layers[l].bias[i], analytic.bias[l][i]);
  }
  return g;
}

std::string posts_table(const std::vector<std::string>& classes, std::size_t per_class, std::uint64_t seed) {
  static const std::vector<std::string> mood{"happy", "good", "fine", "tired", "sad", "lonely", "hopeless", "worthless"};
  Rng rng(seed);
  std::vector<std::string> rows;
  const std::size_t c = classes.size();
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::string text;
      const std::size_t len = 6 + rng.below(6);
      for (std::size_t t = 0; t < len; ++t) {
        if (!text.empty()) text += ' ';
        const double u = rng.uniform();
        if (u < 0.45) {
          text += "c" + std::to_string(k) + "w" + std::to_string(rng.below(5));
        } else if (u < 0.7) {
          const std::size_t centre = (k * (mood.size() - 1)) / std::max<std::size_t>(c - 1, 1);
          const std::size_t lo = centre > 0 ? centre - 1 : 0;
          const std::size_t hi = std::min(centre + 1, mood.size() - 1);
          text += mood[lo + rng.below(hi - lo + 1)];
        } else {
          text += "w" + std::to_string(rng.below(30));
        }
      }
      rows.push_back(text + "\",\"" + classes[k] + "\"");
    }
  }
  rng.shuffle(rows);
  std::string out = "id,text,label\n";
  for (std::size_t i = 0; i < rows.size(); ++i) out += "p" + std::to_string(i) + ",\"" + rows[i] + "\n";
  return out;
}

}  // namespace sevstack::testing
