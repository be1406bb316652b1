#include <benchmark/benchmark.h>

#include "corpus_gen.hpp"
#include "sevstack/learners/learner.hpp"
#include "sevstack/stacking.hpp"
#include "sevstack/vectorize.hpp"

using namespace sevstack;

namespace {

struct Problem {
  FeatureMatrix x;
  std::vector<std::size_t> y;
};

const Problem& problem() {
  static const Problem p = [] {
    const Corpus c = bench::synthetic_corpus(2000, 3000, 4, 7);
    return Problem{transform_tfidf(c, fit_tfidf(c)), c.labels()};
  }();
  return p;
}

void train_kind(benchmark::State& state, LearnerKind kind) {
  const auto& p = problem();
  const LearnerSpec spec = LearnerSpec::defaults(kind);
  for (auto _ : state) benchmark::DoNotOptimize(train(spec, p.x, p.y, 4, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.x.rows()));
}

}  // namespace

BENCHMARK_CAPTURE(train_kind, lr, LearnerKind::logistic)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(train_kind, gbm, LearnerKind::gbm)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(train_kind, adaboost, LearnerKind::adaboost)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(train_kind, mlp, LearnerKind::mlp)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(train_kind, nb, LearnerKind::naive_bayes)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(train_kind, svm, LearnerKind::svm)->Unit(benchmark::kMillisecond);

static void BM_PredictLr(benchmark::State& state) {
  const auto& p = problem();
  const auto model = train(LearnerSpec::defaults(LearnerKind::logistic), p.x, p.y, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(predict_proba(model, p.x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.x.rows()));
}
BENCHMARK(BM_PredictLr)->Unit(benchmark::kMillisecond);

static void BM_FitStacking(benchmark::State& state) {
  const auto& p = problem();
  StackingConfig config = StackingConfig::defaults(1);
  config.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_stacking(p.x, p.y, 4, config));
}
BENCHMARK(BM_FitStacking)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);
