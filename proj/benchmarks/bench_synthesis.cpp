#include <benchmark/benchmark.h>

#include "cgraph/corpus.hpp"
#include "cgraph/fn_ensemble.hpp"

using namespace cgraph;

namespace {

void BM_SynthesizeGreen(benchmark::State& state) {
  auto lib = fn::Library::with_successor();
  lib.add("red", 2, fn::make_iter(fn::Section{0, 0, {}}, fn::make_var(0), fn::make_var(1)));
  std::vector<fn::FunctionExample> green{
      {"green", {2, 4}, 8}, {"green", {3, 4}, 12}, {"green", {2, 5}, 10}};
  for (auto _ : state) benchmark::DoNotOptimize(fn::synthesize(green, lib, 7, fn::Caps{}));
}

// Exhausts every term up to the size cap.
void BM_SynthesizeUnreachable(benchmark::State& state) {
  const auto lib = fn::Library::with_successor();
  std::vector<fn::FunctionExample> green{
      {"green", {2, 4}, 8}, {"green", {3, 4}, 12}, {"green", {2, 5}, 10}};
  const auto cap = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fn::synthesize(green, lib, cap, fn::Caps{}));
}

void BM_LearnEnsemble(benchmark::State& state) {
  const auto e = gen_function_ensemble(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fn::learn_all(e.sets, fn::Library::with_successor(), 7, fn::Caps{}));
  }
}

}  // namespace

BENCHMARK(BM_SynthesizeGreen)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SynthesizeUnreachable)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LearnEnsemble)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
