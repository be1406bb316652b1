#include "sevstack/learners/tree.hpp"

#include <algorithm>

#include "sevstack/error.hpp"

namespace sevstack {

DecisionTree::DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(ErrorCode::contract, "tree needs at least one node");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.feature >= 0 && (n.left <= i || n.right <= i || n.left >= nodes_.size() || n.right >= nodes_.size())) {
      throw Error(ErrorCode::format, "tree node " + std::to_string(i) + " has invalid children");
    }
  }
}

double DecisionTree::predict(const RowView& row) const noexcept {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const Node& n = nodes_[i];
    i = row.at(static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right;
  }
  return nodes_[i].value;
}

std::size_t DecisionTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

std::size_t DecisionTree::depth() const noexcept {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return best;
}

// ---------------------------------------------------------------- binning

BinnedFeatures::BinnedFeatures(const FeatureMatrix& x, std::size_t max_bins) : rows_(x.rows()) {
  if (max_bins < 2) throw Error(ErrorCode::validation, "max_bins must be >= 2");
  const std::size_t d = x.dim();
  // Column-major copy of the nonzeros.
  std::vector<std::size_t> nnz(d + 1, 0);
  for (std::size_t r = 0; r < x.rows(); ++r) x.row(r).for_each_nonzero([&](std::size_t j, double) { ++nnz[j + 1]; });
  col_offset_.assign(d + 1, 0);
  for (std::size_t j = 0; j < d; ++j) col_offset_[j + 1] = col_offset_[j] + nnz[j + 1];
  std::vector<double> col_values(col_offset_[d]);
  entries_.resize(col_offset_[d]);
  std::vector<std::size_t> fill(col_offset_.begin(), col_offset_.end() - 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.row(r).for_each_nonzero([&](std::size_t j, double v) {
      entries_[fill[j]].row = static_cast<std::uint32_t>(r);
      col_values[fill[j]] = v;
      ++fill[j];
    });
  }

  first_bin_.assign(d + 1, 0);
  zero_bin_.assign(d, 0);
  std::vector<double> sorted;
  std::vector<std::pair<double, std::size_t>> distinct;
  std::vector<double> cuts;
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t b = col_offset_[j], e = col_offset_[j + 1];
    sorted.assign(col_values.begin() + static_cast<std::ptrdiff_t>(b), col_values.begin() + static_cast<std::ptrdiff_t>(e));
    const std::size_t zeros = rows_ - (e - b);
    if (zeros > 0) sorted.insert(sorted.end(), 1, 0.0);
    std::sort(sorted.begin(), sorted.end());
    distinct.clear();
    for (double v : sorted) {
      if (!distinct.empty() && distinct.back().first == v) {
        ++distinct.back().second;
      } else {
        distinct.emplace_back(v, 1);
      }
    }
    if (zeros > 0) {
      for (auto& [v, c] : distinct) {
        if (v == 0.0) c = c - 1 + zeros;
      }
    }
    cuts.clear();
    auto add_cut = [&](double a, double bnext) {
      double mid = a + (bnext - a) / 2.0;
      if (!(mid >= a && mid < bnext)) mid = a;
      cuts.push_back(mid);
    };
    if (distinct.size() <= max_bins) {
      for (std::size_t k = 0; k + 1 < distinct.size(); ++k) add_cut(distinct[k].first, distinct[k + 1].first);
    } else {
      const double per_bin = static_cast<double>(rows_) / static_cast<double>(max_bins);
      double acc = 0.0;
      std::size_t next_target = 1;
      for (std::size_t k = 0; k + 1 < distinct.size() && cuts.size() + 1 < max_bins; ++k) {
        acc += static_cast<double>(distinct[k].second);
        if (acc >= per_bin * static_cast<double>(next_target)) {
          add_cut(distinct[k].first, distinct[k + 1].first);
          while (acc >= per_bin * static_cast<double>(next_target)) ++next_target;
        }
      }
    }
    first_bin_[j + 1] = first_bin_[j] + cuts.size() + 1;
    cuts_.insert(cuts_.end(), cuts.begin(), cuts.end());
    auto local_bin = [&](double v) {
      return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
    };
    zero_bin_[j] = first_bin_[j] + local_bin(0.0);
    for (std::size_t k = b; k < e; ++k) {
      entries_[k].bin = static_cast<std::uint32_t>(first_bin_[j] + local_bin(col_values[k]));
    }
  }
}

// ---------------------------------------------------------------- growth

DecisionTree grow_tree(const BinnedFeatures& bins, std::span<const double> row_stats, const TreeGrowth& g) {
  const std::size_t n = bins.rows();
  const std::size_t w = g.width;
  if (row_stats.size() != n * w) throw Error(ErrorCode::contract, "grow_tree: row_stats has the wrong size");

  std::vector<DecisionTree::Node> nodes;
  std::vector<std::vector<double>> totals;
  std::vector<std::int32_t> node_of(n, 0);

  std::vector<double> root(w, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < w; ++k) root[k] += row_stats[r * w + k];
  }
  nodes.push_back({-1, 0.0, 0, 0, g.leaf_value(root)});
  totals.push_back(root);

  std::vector<std::size_t> frontier{0};
  const std::size_t total_bins = bins.total_bins();
  std::vector<double> hist;
  std::vector<double> left(w), right(w);

  for (std::size_t depth = 0; depth < g.max_depth && !frontier.empty(); ++depth) {
    std::vector<std::int32_t> slot_of(nodes.size(), -1);
    std::vector<std::size_t> candidates;
    for (std::size_t id : frontier) {
      if (totals[id][w - 1] >= 2.0 * static_cast<double>(g.min_leaf)) {
        slot_of[id] = static_cast<std::int32_t>(candidates.size());
        candidates.push_back(id);
      }
    }
    if (candidates.empty()) break;

    hist.assign(candidates.size() * total_bins * w, 0.0);
    auto cell = [&](std::size_t slot, std::size_t bin) { return hist.data() + (slot * total_bins + bin) * w; };
    for (std::size_t s = 0; s < candidates.size(); ++s) {
      for (std::size_t f = 0; f < bins.features(); ++f) {
        double* z = cell(s, bins.zero_bin(f));
        for (std::size_t k = 0; k < w; ++k) z[k] = totals[candidates[s]][k];
      }
    }
    for (std::size_t f = 0; f < bins.features(); ++f) {
      const std::size_t zb = bins.zero_bin(f);
      for (const auto& e : bins.column(f)) {
        const std::int32_t node = node_of[e.row];
        if (node < 0) continue;
        const std::int32_t s = slot_of[static_cast<std::size_t>(node)];
        if (s < 0) continue;
        double* dst = cell(static_cast<std::size_t>(s), e.bin);
        double* z = cell(static_cast<std::size_t>(s), zb);
        const double* src = row_stats.data() + static_cast<std::size_t>(e.row) * w;
        for (std::size_t k = 0; k < w; ++k) {
          dst[k] += src[k];
          z[k] -= src[k];
        }
      }
    }

    struct Split {
      std::int32_t feature = -1;
      std::size_t local_bin = 0;
      double gain = 0.0;
    };
    std::vector<Split> best(candidates.size());
    for (std::size_t s = 0; s < candidates.size(); ++s) {
      const auto& tot = totals[candidates[s]];
      const double parent = g.score(tot);
      double best_gain = g.min_gain;
      for (std::size_t f = 0; f < bins.features(); ++f) {
        const std::size_t nb = bins.bin_count(f);
        if (nb < 2) continue;
        std::fill(left.begin(), left.end(), 0.0);
        for (std::size_t b = 0; b + 1 < nb; ++b) {
          const double* h = cell(s, bins.first_bin(f) + b);
          for (std::size_t k = 0; k < w; ++k) left[k] += h[k];
          const double nl = left[w - 1];
          const double nr = tot[w - 1] - nl;
          if (nl < static_cast<double>(g.min_leaf) - 0.5) continue;
          if (nr < static_cast<double>(g.min_leaf) - 0.5) break;
          for (std::size_t k = 0; k < w; ++k) right[k] = tot[k] - left[k];
          const double gain = g.score(left) + g.score(right) - parent;
          if (gain > best_gain) {
            best_gain = gain;
            best[s] = {static_cast<std::int32_t>(f), b, gain};
          }
        }
      }
    }

    // Materialize children and route rows.
    std::vector<std::int32_t> new_node(node_of);
    std::vector<std::size_t> next_frontier;
    for (std::size_t s = 0; s < candidates.size(); ++s) {
      if (best[s].feature < 0) continue;
      const std::size_t id = candidates[s];
      const auto f = static_cast<std::size_t>(best[s].feature);
      const std::size_t split_bin = bins.first_bin(f) + best[s].local_bin;
      const auto left_id = static_cast<std::uint32_t>(nodes.size());
      const auto right_id = left_id + 1;
      nodes[id].feature = best[s].feature;
      nodes[id].threshold = bins.cut(f, best[s].local_bin);
      nodes[id].left = left_id;
      nodes[id].right = right_id;
      nodes.push_back({});
      nodes.push_back({});
      totals.emplace_back(w, 0.0);
      totals.emplace_back(w, 0.0);
      const bool zero_goes_left = bins.zero_bin(f) <= split_bin;
      for (std::size_t r = 0; r < n; ++r) {
        if (node_of[r] == static_cast<std::int32_t>(id)) {
          new_node[r] = static_cast<std::int32_t>(zero_goes_left ? left_id : right_id);
        }
      }
      for (const auto& e : bins.column(f)) {
        if (node_of[e.row] == static_cast<std::int32_t>(id)) {
          new_node[e.row] = static_cast<std::int32_t>(e.bin <= split_bin ? left_id : right_id);
        }
      }
      next_frontier.push_back(left_id);
      next_frontier.push_back(right_id);
    }
    node_of.swap(new_node);
    for (std::size_t r = 0; r < n; ++r) {
      const auto id = static_cast<std::size_t>(node_of[r]);
      if (std::find(next_frontier.begin(), next_frontier.end(), id) != next_frontier.end()) {
        for (std::size_t k = 0; k < w; ++k) totals[id][k] += row_stats[r * w + k];
      }
    }
    for (std::size_t id : next_frontier) nodes[id].value = g.leaf_value(totals[id]);
    frontier.swap(next_frontier);
  }
  return DecisionTree(std::move(nodes));
}

DecisionTree fit_regression_tree(const BinnedFeatures& bins, std::span<const double> targets, std::size_t max_depth,
                                 std::size_t min_leaf) {
  std::vector<double> stats(targets.size() * 2);
  for (std::size_t r = 0; r < targets.size(); ++r) {
    stats[2 * r] = targets[r];
    stats[2 * r + 1] = 1.0;
  }
  TreeGrowth g;
  g.max_depth = max_depth;
  g.min_leaf = std::max<std::size_t>(1, min_leaf);
  g.width = 2;
  g.score = [](std::span<const double> s) { return s[1] > 0.0 ? s[0] * s[0] / s[1] : 0.0; };
  g.leaf_value = [](std::span<const double> s) { return s[1] > 0.0 ? s[0] / s[1] : 0.0; };
  return grow_tree(bins, stats, g);
}

}  // namespace sevstack
