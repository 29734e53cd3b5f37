#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "garble/align.hpp"
#include "garble/engine.hpp"

namespace {

void BM_Align(benchmark::State& state) {
  const std::size_t chars = static_cast<std::size_t>(state.range(0));
  const std::string gt = garble::bench::random_text(chars, 1);
  const auto table = garble::bench::bench_table();
  const std::string ocr = garble::corrupt(gt, table, 0.2, 7).corrupted;
  for (auto _ : state) {
    benchmark::DoNotOptimize(garble::align(gt, ocr));
  }
  state.SetItemsProcessed(state.iterations() * chars);
}

}  // namespace

BENCHMARK(BM_Align)->Arg(100)->Arg(500)->Arg(2000);
