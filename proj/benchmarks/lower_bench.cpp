#include <benchmark/benchmark.h>

#include "rybu/dedan/text.hpp"
#include "rybu/lang/parser.hpp"
#include "rybu/lower/lower.hpp"
#include "rybu/service/loader.hpp"

namespace {

std::string source(const char* file) { return rybu::service::read_file(std::string(RYBU_MODELS_DIR) + "/" + file); }

void BM_Parse(benchmark::State& state, const char* file) {
  const std::string text = source(file);
  for (auto _ : state) benchmark::DoNotOptimize(rybu::lang::parse_program(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}

void BM_Lower(benchmark::State& state, const char* file) {
  const auto program = rybu::lang::parse_program(source(file));
  for (auto _ : state) benchmark::DoNotOptimize(rybu::lower::lower_program(program));
}

void BM_CompileToDedan(benchmark::State& state, const char* file) {
  const std::string text = source(file);
  for (auto _ : state) benchmark::DoNotOptimize(rybu::service::compile_to_dedan(text, "bench", {}));
}

void BM_DedanRoundTrip(benchmark::State& state) {
  const std::string text = source("two_sem.dedan");
  for (auto _ : state) {
    auto unit = rybu::dedan::parse_dedan(text);
    benchmark::DoNotOptimize(rybu::dedan::expand(unit));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Parse, warehouse, "warehouse.rybu");
BENCHMARK_CAPTURE(BM_Lower, buffers, "buffers.rybu");
BENCHMARK_CAPTURE(BM_Lower, warehouse, "warehouse.rybu");
BENCHMARK_CAPTURE(BM_CompileToDedan, warehouse, "warehouse.rybu");
BENCHMARK(BM_DedanRoundTrip);
BENCHMARK_MAIN();
