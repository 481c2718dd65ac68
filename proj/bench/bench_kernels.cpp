// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "xlra/random.hpp"
#include "xlra/regression.hpp"

using namespace xlra;

namespace {

struct Problem {
  std::vector<FeatureSet> features;
  std::vector<ComplexField> targets;
  std::vector<ComplexField> coeffs;
};

Problem make_problem(std::size_t n_freq, std::size_t n_inst, std::size_t m) {
  Rng rng(1);
  Problem p;
  for (std::size_t i = 0; i < n_inst; ++i) {
    FeatureSet fs(m, ComplexField(n_freq));
    for (auto& f : fs)
      for (auto& v : f) v = {rng.normal(), rng.normal()};
    ComplexField t(n_freq);
    for (auto& v : t) v = {rng.normal(), rng.normal()};
    p.features.push_back(std::move(fs));
    p.targets.push_back(std::move(t));
  }
  p.coeffs = fit_frequencies_serial(p.features, p.targets, 1e-8);
  return p;
}

// range(0): cells, range(1): basis size
void BM_FitSerial(benchmark::State& st) {
  const auto p = make_problem(static_cast<std::size_t>(st.range(0)), 10, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(fit_frequencies_serial(p.features, p.targets, 1e-8));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_FitParallel(benchmark::State& st) {
  const auto p = make_problem(static_cast<std::size_t>(st.range(0)), 10, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(fit_frequencies_parallel(p.features, p.targets, 1e-8));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_CombineSerial(benchmark::State& st) {
  const auto p = make_problem(static_cast<std::size_t>(st.range(0)), 1, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(combine_serial(p.coeffs, p.features[0]));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_CombineParallel(benchmark::State& st) {
  const auto p = make_problem(static_cast<std::size_t>(st.range(0)), 1, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(combine_parallel(p.coeffs, p.features[0]));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// 31^2 two-phase, 31^2 planar polycrystal, 15^3 GSH
#define XLRA_SIZES Args({961, 2})->Args({961, 3})->Args({3375, 10})

BENCHMARK(BM_FitSerial)->XLRA_SIZES;
BENCHMARK(BM_FitParallel)->XLRA_SIZES;
BENCHMARK(BM_CombineSerial)->XLRA_SIZES;
BENCHMARK(BM_CombineParallel)->XLRA_SIZES;

}  // namespace

BENCHMARK_MAIN();
