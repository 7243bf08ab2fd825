#include <benchmark/benchmark.h>

#include "cgraph/corpus.hpp"
#include "cgraph/inducer.hpp"
#include "cgraph/parser.hpp"

using namespace cgraph;

namespace {

// Graph trained on the first half of a grammar corpus; the second half is parsed.
struct Fixture {
  GrammarCorpus corpus = gen_grammar_corpus(7, 4, 8192);
  ConceptGraph graph{corpus.alphabet, Config{}};
  Fixture() {
    for (std::size_t i = 0; i < 4096; i += 64) {
      ingest(graph, TokenSeq(corpus.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                             corpus.tokens.begin() + static_cast<std::ptrdiff_t>(i + 64)));
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Parse(benchmark::State& state) {
  const auto& f = fixture();
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto budget = Budget{static_cast<std::uint32_t>(state.range(1))};
  ParseOptions opts;
  opts.use_fast_path_index = state.range(2) != 0;
  TokenSeq input(f.corpus.tokens.begin() + 4096,
                 f.corpus.tokens.begin() + 4096 + static_cast<std::ptrdiff_t>(len));
  for (auto _ : state) benchmark::DoNotOptimize(parse(f.graph, input, budget, opts));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * len));
}

}  // namespace

BENCHMARK(BM_Parse)
    ->ArgNames({"len", "budget", "index"})
    ->Args({64, 0, 1})
    ->Args({64, 0, 0})
    ->Args({256, 0, 1})
    ->Args({256, 2, 1})
    ->Args({1024, 0, 1});

BENCHMARK_MAIN();
