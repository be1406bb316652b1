#include "sevstack/learners/mlp.hpp"

#include <cmath>
#include <numeric>

#include "sevstack/error.hpp"
#include "sevstack/random.hpp"

namespace sevstack {

MlpModel MlpModel::initialize(std::size_t dim, const std::vector<std::size_t>& hidden_sizes, std::size_t classes,
                              std::uint64_t seed) {
  MlpModel m;
  m.classes = classes;
  m.dim = dim;
  std::vector<std::size_t> widths{dim};
  widths.insert(widths.end(), hidden_sizes.begin(), hidden_sizes.end());
  widths.push_back(classes);
  const Rng root(seed);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    if (widths[l + 1] == 0) throw Error(ErrorCode::validation, "mlp: layer width must be >= 1");
    DenseLayer layer{DenseMatrix(widths[l + 1], widths[l]), std::vector<double>(widths[l + 1], 0.0),
                     l + 2 == widths.size() ? Activation::softmax : Activation::relu};
    const double bound = widths[l] > 0 ? 1.0 / std::sqrt(static_cast<double>(widths[l])) : 0.0;
    Rng rng = root.fork({l});
    for (double& v : layer.weights.data()) v = rng.uniform(-bound, bound);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

namespace {

void forward_row(const MlpModel& m, const RowView& input, std::vector<std::vector<double>>& acts) {
  acts.resize(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const DenseLayer& layer = m.layers[l];
    auto& out = acts[l];
    out.assign(layer.bias.begin(), layer.bias.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (l == 0) {
        out[i] += input.dot(layer.weights.row(i));
      } else {
        const auto w = layer.weights.row(i);
        const auto& prev = acts[l - 1];
        double s = 0.0;
        for (std::size_t j = 0; j < prev.size(); ++j) s += w[j] * prev[j];
        out[i] += s;
      }
    }
    if (layer.activation == Activation::relu) {
      for (double& v : out) v = v > 0.0 ? v : 0.0;
    } else {
      softmax_inplace(out);
    }
  }
}

}  // namespace

std::vector<DenseMatrix> mlp_forward(const MlpModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "mlp");
  std::vector<DenseMatrix> result;
  for (const auto& layer : model.layers) result.emplace_back(x.rows(), layer.bias.size());
  std::vector<std::vector<double>> acts;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    forward_row(model, x.row(r), acts);
    for (std::size_t l = 0; l < acts.size(); ++l) std::copy(acts[l].begin(), acts[l].end(), result[l].row(r).begin());
  }
  return result;
}

MlpGradient mlp_loss_and_gradient(const MlpModel& model, const FeatureMatrix& x, Labels y,
                                  std::span<const std::size_t> rows) {
  check_feature_dim(model.dim, x.dim(), "mlp");
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(x.rows());
    std::iota(all.begin(), all.end(), 0);
    rows = all;
  }
  MlpGradient g;
  for (const auto& layer : model.layers) {
    g.weights.emplace_back(layer.weights.rows(), layer.weights.cols());
    g.bias.emplace_back(layer.bias.size(), 0.0);
  }
  const double inv_n = rows.empty() ? 0.0 : 1.0 / static_cast<double>(rows.size());
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;
  for (std::size_t r : rows) {
    const RowView input = x.row(r);
    forward_row(model, input, acts);
    const auto& out = acts.back();
    g.loss -= std::log(std::max(out[y[r]], 1e-300)) * inv_n;
    // softmax + cross-entropy: dL/dz = p - onehot
    delta.assign(out.begin(), out.end());
    delta[y[r]] -= 1.0;
    for (double& v : delta) v *= inv_n;
    for (std::size_t l = model.layers.size(); l-- > 0;) {
      const DenseLayer& layer = model.layers[l];
      for (std::size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] == 0.0) continue;
        g.bias[l][i] += delta[i];
        auto gw = g.weights[l].row(i);
        if (l == 0) {
          input.axpy(delta[i], gw);
        } else {
          const auto& prev = acts[l - 1];
          for (std::size_t j = 0; j < prev.size(); ++j) gw[j] += delta[i] * prev[j];
        }
      }
      if (l == 0) break;
      const auto& prev = acts[l - 1];
      prev_delta.assign(prev.size(), 0.0);
      for (std::size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] == 0.0) continue;
        const auto w = layer.weights.row(i);
        for (std::size_t j = 0; j < prev.size(); ++j) prev_delta[j] += delta[i] * w[j];
      }
      // ReLU derivative (0 at the kink)
      for (std::size_t j = 0; j < prev.size(); ++j) {
        if (prev[j] <= 0.0) prev_delta[j] = 0.0;
      }
      delta.swap(prev_delta);
    }
  }
  return g;
}

MlpModel train_mlp(const FeatureMatrix& x, Labels y, std::size_t classes, const MlpConfig& config,
                   std::uint64_t seed) {
  check_training_inputs(x, y, classes, "mlp");
  if (!(config.step > 0.0) || config.batch == 0) throw Error(ErrorCode::validation, "mlp: need step > 0 and batch >= 1");
  const Rng root(seed);
  MlpModel model = MlpModel::initialize(x.dim(), config.hidden_sizes, classes, root.fork({0}).key());
  const std::size_t n = x.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const bool full_batch = config.batch >= n;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (!full_batch) {
      Rng rng = root.fork({1, epoch});
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
    }
    for (std::size_t start = 0; start < n; start += config.batch) {
      const std::size_t end = std::min(n, start + config.batch);
      const MlpGradient g =
          mlp_loss_and_gradient(model, x, y, std::span<const std::size_t>(order.data() + start, end - start));
      if (!std::isfinite(g.loss)) {
        throw Error(ErrorCode::divergence, "mlp: non-finite loss in epoch " + std::to_string(epoch));
      }
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& wv = model.layers[l].weights.data();
        const auto& gw = g.weights[l].data();
        for (std::size_t i = 0; i < wv.size(); ++i) wv[i] -= config.step * gw[i];
        for (std::size_t i = 0; i < model.layers[l].bias.size(); ++i) {
          model.layers[l].bias[i] -= config.step * g.bias[l][i];
        }
      }
    }
  }
  return model;
}

DenseMatrix predict_proba(const MlpModel& model, const FeatureMatrix& x) {
  check_feature_dim(model.dim, x.dim(), "mlp");
  DenseMatrix out(x.rows(), model.classes);
  std::vector<std::vector<double>> acts;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    forward_row(model, x.row(r), acts);
    std::copy(acts.back().begin(), acts.back().end(), out.row(r).begin());
  }
  return out;
}

}  // namespace sevstack
