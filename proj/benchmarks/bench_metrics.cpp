#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "garble/engine.hpp"
#include "garble/metrics.hpp"

namespace {

void BM_Cer(benchmark::State& state) {
  const std::size_t chars = static_cast<std::size_t>(state.range(0));
  const std::string reference = garble::bench::random_text(chars, 2);
  const auto table = garble::bench::bench_table();
  const std::string hypothesis = garble::corrupt(reference, table, 0.15, 11).corrupted;
  for (auto _ : state) {
    benchmark::DoNotOptimize(garble::cer(reference, hypothesis));
  }
  state.SetItemsProcessed(state.iterations() * chars);
}

void BM_Wer(benchmark::State& state) {
  const std::size_t chars = static_cast<std::size_t>(state.range(0));
  const std::string reference = garble::bench::random_text(chars, 3);
  const auto table = garble::bench::bench_table();
  const std::string hypothesis = garble::corrupt(reference, table, 0.15, 13).corrupted;
  for (auto _ : state) {
    benchmark::DoNotOptimize(garble::wer(reference, hypothesis));
  }
  state.SetItemsProcessed(state.iterations() * chars);
}

}  // namespace

BENCHMARK(BM_Cer)->Arg(100)->Arg(500)->Arg(2000);
BENCHMARK(BM_Wer)->Arg(500)->Arg(2000)->Arg(10000);
