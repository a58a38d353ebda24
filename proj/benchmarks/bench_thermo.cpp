#include <benchmark/benchmark.h>

#include <string>

#include "thermoform/config.hpp"
#include "thermoform/poincare.hpp"
#include "thermoform/spectral.hpp"
#include "thermoform/thermo.hpp"

namespace {

thermoform::SystemConfig system(const std::string& name) {
  return thermoform::load_config(std::string(THERMOFORM_CONFIG_DIR) + "/" + name + ".cfg");
}

void BM_Pressure(benchmark::State& state) {
  const auto sys = system("toy_depth2");
  const thermoform::PressureFunction p(sys.subshift(), sys.potential);
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p(x));
    x = x < 1.0 ? x + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_Pressure);

void BM_FindDelta(benchmark::State& state) {
  const auto sys = system("two_three");
  for (auto _ : state) benchmark::DoNotOptimize(thermoform::find_delta(sys.subshift(), sys.potential));
}
BENCHMARK(BM_FindDelta)->Unit(benchmark::kMicrosecond);

void BM_CriticalLineScan(benchmark::State& state) {
  const auto sys = system("golden_half");
  const double delta = thermoform::find_delta(sys.subshift(), sys.potential).delta;
  for (auto _ : state)
    benchmark::DoNotOptimize(thermoform::critical_line_scan(sys.subshift(), sys.potential, delta, 20.0, 2000));
}
BENCHMARK(BM_CriticalLineScan)->Unit(benchmark::kMillisecond);

void BM_Residue(benchmark::State& state) {
  const auto sys = system("two_three");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        thermoform::residue_estimate(sys.subshift(), sys.potential, sys.tail, thermoform::TargetSet::all()));
}
BENCHMARK(BM_Residue)->Unit(benchmark::kMicrosecond);

}  // namespace
