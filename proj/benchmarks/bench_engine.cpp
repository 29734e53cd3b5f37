#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "garble/align.hpp"
#include "garble/engine.hpp"
#include "garble/prob_table.hpp"

namespace {

void BM_Corrupt(benchmark::State& state) {
  const std::size_t chars = static_cast<std::size_t>(state.range(0));
  const std::string text = garble::bench::random_text(chars, 4);
  const auto table = garble::bench::bench_table();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(garble::corrupt(text, table, 0.2, seed++));
  }
  state.SetItemsProcessed(state.iterations() * chars);
}

void BM_CorruptCerWer(benchmark::State& state) {
  const std::size_t chars = static_cast<std::size_t>(state.range(0));
  const std::string text = garble::bench::random_text(chars, 5);
  const auto table = garble::bench::bench_table();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(garble::corrupt_cer_wer(text, table, 0.1, 0.2, seed++));
  }
  state.SetItemsProcessed(state.iterations() * chars);
}

void BM_Learn(benchmark::State& state) {
  const auto table = garble::bench::bench_table();
  std::vector<garble::AlignedPair> pairs;
  for (int i = 0; i < 50; ++i) {
    const std::string gt = garble::bench::random_text(200, 100 + i);
    const std::string ocr = garble::corrupt(gt, table, 0.2, 200 + i).corrupted;
    pairs.push_back(garble::align(gt, ocr));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(garble::learn(pairs));
  }
  state.SetItemsProcessed(state.iterations() * 50 * 200);
}

}  // namespace

BENCHMARK(BM_Corrupt)->Arg(200)->Arg(2000);
BENCHMARK(BM_CorruptCerWer)->Arg(200)->Arg(2000);
BENCHMARK(BM_Learn);
