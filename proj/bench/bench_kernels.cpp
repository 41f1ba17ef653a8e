// Serial vs OpenMP pixel kernels on synthetic screenshots.

#include <benchmark/benchmark.h>

#include "recode/kernels.hpp"
#include "recode/synth.hpp"

namespace {

recode::RgbImage screenshot(int scale) {
  recode::CorpusSpec spec;
  spec.n_reports = 1;
  spec.width = 240 * scale;
  spec.height = 400 * scale;
  spec.seed = 11;
  return recode::generate_report(spec, 0).report.screenshot;
}

void BM_Binarize(benchmark::State& state) {
  const auto img = screenshot(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recode::kernels::binarize(img));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

void BM_BinarizeSerial(benchmark::State& state) {
  const auto img = screenshot(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recode::kernels::binarize_serial(img));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

void BM_Grayscale(benchmark::State& state) {
  const auto img = screenshot(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recode::kernels::grayscale(img));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

void BM_GrayscaleSerial(benchmark::State& state) {
  const auto img = screenshot(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recode::kernels::grayscale_serial(img));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

void BM_BlankComponent(benchmark::State& state) {
  const auto mask = recode::kernels::binarize(screenshot(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(recode::kernels::largest_background_component(mask));
}

void BM_BlankComponentSerial(benchmark::State& state) {
  const auto mask = recode::kernels::binarize(screenshot(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(recode::kernels::largest_background_component_serial(mask));
}

}  // namespace

BENCHMARK(BM_Binarize)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_BinarizeSerial)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_Grayscale)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_GrayscaleSerial)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_BlankComponent)->Arg(1)->Arg(4)->Arg(8);
BENCHMARK(BM_BlankComponentSerial)->Arg(1)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
