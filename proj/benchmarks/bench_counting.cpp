#include <benchmark/benchmark.h>

#include <cmath>
#include <string>

#include "thermoform/config.hpp"
#include "thermoform/counting.hpp"

namespace {

thermoform::SystemConfig system(const std::string& name) {
  return thermoform::load_config(std::string(THERMOFORM_CONFIG_DIR) + "/" + name + ".cfg");
}

thermoform::CountQuery plain(const thermoform::SystemConfig& sys, double t) {
  thermoform::CountQuery q;
  q.tail = sys.tail;
  q.threshold = t;
  return q;
}

void BM_CountCantor(benchmark::State& state) {
  const auto sys = system("cantor13");
  const double t = static_cast<double>(state.range(0)) * std::log(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(thermoform::count(sys.subshift(), sys.potential, plain(sys, t)));
}
BENCHMARK(BM_CountCantor)->Arg(10)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CountTwoThreeThreads(benchmark::State& state) {
  const auto sys = system("two_three");
  const thermoform::CountOptions options{static_cast<unsigned>(state.range(0))};
  for (auto _ : state)
    benchmark::DoNotOptimize(thermoform::count(sys.subshift(), sys.potential, plain(sys, 16.0), options));
}
BENCHMARK(BM_CountTwoThreeThreads)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_OracleTwoThree(benchmark::State& state) {
  const auto sys = system("two_three");
  for (auto _ : state)
    benchmark::DoNotOptimize(thermoform::count_oracle(sys.subshift(), sys.potential, plain(sys, 10.0)));
}
BENCHMARK(BM_OracleTwoThree)->Unit(benchmark::kMillisecond);

void BM_SeriesTwoThree(benchmark::State& state) {
  const auto sys = system("two_three");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        thermoform::count_series(sys.subshift(), sys.potential, plain(sys, 0.0), 9.0, 18.0, 0.7878849110258699));
}
BENCHMARK(BM_SeriesTwoThree)->Unit(benchmark::kMillisecond);

}  // namespace
