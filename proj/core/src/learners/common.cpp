#include "sevstack/learners/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sevstack/error.hpp"
#include "sevstack/parallel.hpp"

namespace sevstack {

void check_training_inputs(const FeatureMatrix& x, Labels y, std::size_t classes, std::string_view learner) {
  const std::string who(learner);
  if (classes == 0) throw Error(ErrorCode::contract, who + ": class count must be >= 1");
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::contract, who + ": " + std::to_string(x.rows()) + " feature rows but " +
                                         std::to_string(y.size()) + " labels");
  }
  if (x.rows() < classes) {
    throw Error(ErrorCode::contract, who + ": " + std::to_string(x.rows()) + " rows for " + std::to_string(classes) +
                                         " classes");
  }
  std::vector<char> seen(classes, 0);
  for (std::size_t label : y) {
    if (label >= classes) {
      throw Error(ErrorCode::contract, who + ": label " + std::to_string(label) + " >= class count " +
                                           std::to_string(classes));
    }
    seen[label] = 1;
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (!seen[c]) throw Error(ErrorCode::contract, who + ": class " + std::to_string(c) + " has no training rows");
  }
}

void check_feature_dim(std::size_t expected, std::size_t actual, std::string_view learner) {
  if (expected != actual) {
    throw Error(ErrorCode::contract, std::string(learner) + ": feature dim mismatch (expected " +
                                         std::to_string(expected) + ", got " + std::to_string(actual) + ")");
  }
}

void softmax_inplace(std::span<double> z) noexcept {
  if (z.empty()) return;
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::size_t argmax(std::span<const double> v) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::vector<std::size_t> argmax_rows(const DenseMatrix& proba) {
  std::vector<std::size_t> out(proba.rows());
  for (std::size_t r = 0; r < proba.rows(); ++r) out[r] = argmax(proba.row(r));
  return out;
}

std::vector<double> class_priors(Labels y, std::size_t classes) {
  std::vector<double> p(classes, 0.0);
  for (std::size_t label : y) p[label] += 1.0;
  if (!y.empty()) {
    for (double& v : p) v /= static_cast<double>(y.size());
  }
  return p;
}

double mean_log_loss(const DenseMatrix& proba, Labels y) {
  double loss = 0.0;
  for (std::size_t r = 0; r < proba.rows(); ++r) loss -= std::log(std::max(proba(r, y[r]), 1e-300));
  return proba.rows() == 0 ? 0.0 : loss / static_cast<double>(proba.rows());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t threads) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (i < failed_index) {
              failed_index = i;
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sevstack
