#include <benchmark/benchmark.h>

#include "kiristat/config.hpp"
#include "kiristat/design.hpp"
#include "kiristat/fitting.hpp"
#include "kiristat/statics.hpp"

namespace {

const kiri::ToolConfig& config() {
  static const kiri::ToolConfig c = kiri::table1_preset();
  return c;
}

void BM_EvaluateState(benchmark::State& state) {
  const kiri::ToolConfig& c = config();
  double dx = 0.0;
  for (auto _ : state) {
    dx = dx < 26.0 ? dx + 0.1 : 0.0;
    benchmark::DoNotOptimize(
        kiri::evaluate_state(c.geometry, c.spring, c.material, c.band, dx));
  }
}
BENCHMARK(BM_EvaluateState);

void BM_InvertAppliedForce(benchmark::State& state) {
  const kiri::ToolConfig& c = config();
  const double target =
      kiri::evaluate_state(c.geometry, c.spring, c.material, c.band, 10.0).applied_force_n;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kiri::invert_applied_force(c.geometry, c.spring, c.material, c.band, target));
  }
}
BENCHMARK(BM_InvertAppliedForce);

void BM_FitStiffnessFactor(benchmark::State& state) {
  std::vector<kiri::MeasurementSeries> datasets;
  int trial = 1;
  for (double modulus : {10.0, 14.9, 20.0}) {
    kiri::MeasurementSeries s;
    s.trial_id = trial++;
    s.material = kiri::MaterialSpec{modulus, ""};
    for (int i = 1; i <= 10; ++i) s.samples.push_back({5.0 * i, 4.55 * modulus * 5.0 * i});
    datasets.push_back(std::move(s));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(kiri::fit_kirigami_stiffness_factor(datasets));
  }
}
BENCHMARK(BM_FitStiffnessFactor);

void BM_ParameterSweep(benchmark::State& state) {
  const kiri::ToolConfig& c = config();
  kiri::SweepGrid grid;
  for (int i = 0; i < 10; ++i) {
    grid.youngs_modulus_mpa.push_back(5.0 + i);
    grid.delta_x_mm.push_back(1.0 + 2.0 * i);
  }
  grid.band_stiffness_n_per_mm = {0.0, 2.18};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kiri::parameter_sweep(c.geometry, c.spring, c.material, c.band, grid));
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_ParameterSweep);

void BM_TorqueProfile(benchmark::State& state) {
  const kiri::ToolConfig& c = config();
  const kiri::ClosureTrajectory ramp = kiri::linear_ramp(0.0, 25.0, 101);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kiri::torque_profile(c.geometry, c.spring, c.material, c.band, ramp, 1.0, 1.5));
  }
}
BENCHMARK(BM_TorqueProfile);

}  // namespace

BENCHMARK_MAIN();
