#include <benchmark/benchmark.h>

#include "corpus_gen.hpp"
#include "sevstack/sentiment.hpp"
#include "sevstack/vectorize.hpp"

using namespace sevstack;

static void BM_FitTfidf(benchmark::State& state) {
  const Corpus c = bench::synthetic_corpus(static_cast<std::size_t>(state.range(0)), 5000, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_tfidf(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitTfidf)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_TransformTfidf(benchmark::State& state) {
  const Corpus c = bench::synthetic_corpus(static_cast<std::size_t>(state.range(0)), 5000, 4, 1);
  const auto vocab = fit_tfidf(c);
  for (auto _ : state) benchmark::DoNotOptimize(transform_tfidf(c, vocab));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransformTfidf)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ScoreDocument(benchmark::State& state) {
  const Lexicon lex = load_bundled_lexicon();
  const auto tokens = tokenize("I can't stand how hopeless and tired I feel, nothing good ever happens, some kind of "
                               "misery that will not go away no matter how hard I try to be happy");
  for (auto _ : state) benchmark::DoNotOptimize(score_document(tokens, lex));
}
BENCHMARK(BM_ScoreDocument);
