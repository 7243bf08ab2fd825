#include <benchmark/benchmark.h>

#include <random>

#include "cgraph/corpus.hpp"
#include "cgraph/inducer.hpp"

using namespace cgraph;

namespace {

void BM_IngestGrammarCorpus(benchmark::State& state) {
  const auto corpus = gen_grammar_corpus(7, 4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    ConceptGraph g(corpus.alphabet, Config{});
    for (std::size_t i = 0; i < corpus.tokens.size(); i += 64) {
      const auto end = std::min(corpus.tokens.size(), i + 64);
      ingest(g, TokenSeq(corpus.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                         corpus.tokens.begin() + static_cast<std::ptrdiff_t>(end)));
    }
    benchmark::DoNotOptimize(g.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IngestRandom(benchmark::State& state) {
  const auto episodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::mt19937_64 rng(1);
    ConceptGraph g(Alphabet("abcdefghijklmnop"), Config{});
    for (int i = 0; i < episodes; ++i) {
      TokenSeq t(rng() % 257);
      const auto sigma = 1 + rng() % 16;
      for (auto& x : t) x = static_cast<Token>(rng() % sigma);
      ingest(g, t);
    }
    benchmark::DoNotOptimize(g.size());
  }
}

}  // namespace

BENCHMARK(BM_IngestGrammarCorpus)->Arg(2048)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IngestRandom)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
