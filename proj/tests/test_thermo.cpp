#include <doctest.h>

#include <cmath>
#include <numeric>

#include "systems.hpp"
#include "thermoform/error.hpp"
#include "thermoform/thermo.hpp"

using namespace thermoform;
using testing_support::kLog2;
using testing_support::kLog3;
using testing_support::load_system;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// Root of 2^{-x} + 3^{-x} = 1 by plain bisection on the closed form.
double two_three_root() {
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::pow(2.0, -mid) + std::pow(3.0, -mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("perron data") {
  const auto cantor = load_system("cantor13");
  const double delta = std::log(2.0) / kLog3;
  const auto at_delta = perron_data(cantor.subshift(), cantor.potential, delta);
  CHECK(at_delta.lambda == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(at_delta.right[0] == doctest::Approx(at_delta.right[1]));
  CHECK(at_delta.left[0] == doctest::Approx(at_delta.left[1]));

  const auto tt = load_system("two_three");
  CHECK(perron_data(tt.subshift(), tt.potential, 1.0).lambda == doctest::Approx(5.0 / 6.0).epsilon(1e-13));

  const auto golden = load_system("golden_half");
  const auto flat = golden.potential.scaled(0.0);
  CHECK(perron_data(golden.subshift(), flat, 3.7).lambda == doctest::Approx(kPhi).epsilon(1e-13));
}

TEST_CASE("pressure closed forms") {
  const auto tt = load_system("two_three");
  for (double x : {0.0, 0.3, 1.0, 2.5})
    CHECK(pressure(tt.subshift(), tt.potential, x) ==
          doctest::Approx(std::log(std::pow(2.0, -x) + std::pow(3.0, -x))).epsilon(1e-12));
  CHECK(pressure(tt.subshift(), tt.potential, 1.0) == doctest::Approx(-0.182322).epsilon(1e-6));

  const auto golden = load_system("golden_half");
  CHECK(pressure(golden.subshift(), golden.potential, 1.0) == doctest::Approx(-0.211935).epsilon(1e-6));
  CHECK(pressure(golden.subshift(), golden.potential, 1.0) == doctest::Approx(std::log(kPhi) - kLog2));

  const auto full = testing_support::full_shift(2);
  const std::vector<double> zero{0.0, 0.0};
  const auto f0 = LocallyConstantPotential::per_symbol(full.subshift, zero);
  CHECK(pressure(full.subshift, f0, 5.0) == doctest::Approx(kLog2));
}

TEST_CASE("pressure is strictly decreasing and convex") {
  for (const char* name : {"cantor13", "two_three", "golden_half", "toy_depth2"}) {
    const auto sys = load_system(name);
    std::vector<double> p;
    for (int i = 0; i <= 30; ++i) p.push_back(pressure(sys.subshift(), sys.potential, 0.1 * i));
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] < p[i - 1]);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) CHECK(p[i - 1] - 2 * p[i] + p[i + 1] >= -1e-12);
  }
}

TEST_CASE("fekete sequence approaches the pressure") {
  for (const char* name : {"two_three", "golden_half", "toy_depth2"}) {
    const auto sys = load_system(name);
    const double x = 0.8;
    const double p = pressure(sys.subshift(), sys.potential, x);
    const auto seq = fekete_sequence(sys.subshift(), sys.potential, x, 14);
    REQUIRE(seq.size() == 14);
    for (std::size_t n = 1; n <= seq.size(); ++n) CHECK(std::abs(seq[n - 1] - p) <= 3.0 / static_cast<double>(n));
  }
}

TEST_CASE("bowen root") {
  const auto cantor = load_system("cantor13");
  const auto d = find_delta(cantor.subshift(), cantor.potential);
  CHECK(std::abs(d.delta - kLog2 / kLog3) <= 1e-12);
  CHECK(std::abs(d.pressure_at_delta) <= 1e-12);
  CHECK(d.pressure_at_zero == doctest::Approx(kLog2));

  const auto tt = load_system("two_three");
  CHECK(std::abs(find_delta(tt.subshift(), tt.potential).delta - two_three_root()) <= 1e-12);
  CHECK(find_delta(tt.subshift(), tt.potential).delta == doctest::Approx(0.787885).epsilon(1e-6));
}

TEST_CASE("bowen root errors") {
  const auto tt = load_system("two_three");
  try {
    find_delta(tt.subshift(), tt.potential.scaled(-1.0));
    FAIL("expected NonNegativeWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonNegativeWeight);
  }
  const auto single = validate_subshift({{"0"}, {{1}}, 1.0});
  const std::vector<double> w{-1.0};
  try {
    find_delta(single.subshift, LocallyConstantPotential::per_symbol(single.subshift, w));
    FAIL("expected NotRegular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotRegular);
  }
}

TEST_CASE("gibbs profile of the D-generic example") {
  const auto tt = load_system("two_three");
  const double delta = find_delta(tt.subshift(), tt.potential).delta;
  const auto g = gibbs_profile(tt.subshift(), tt.potential, delta);
  CHECK(g.m[0] == doctest::Approx(std::pow(2.0, -delta)).epsilon(1e-12));
  CHECK(g.m[1] == doctest::Approx(std::pow(3.0, -delta)).epsilon(1e-12));
  CHECK(g.m[0] == doctest::Approx(0.579193).epsilon(1e-6));
  CHECK(g.h[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.h[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.q_gibbs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cylinder_measure(g, MeasureKind::Eigen, Word{0, 1}) == doctest::Approx(0.243729).epsilon(1e-6));
}

TEST_CASE("gibbs profile normalizations and stationarity") {
  for (const char* name : {"cantor13", "two_three", "golden_half", "toy_depth2"}) {
    const auto sys = load_system(name);
    const double delta = find_delta(sys.subshift(), sys.potential).delta;
    const auto g = gibbs_profile(sys.subshift(), sys.potential, delta);
    CHECK(std::accumulate(g.m.begin(), g.m.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double hm = 0.0;
    for (std::size_t i = 0; i < g.m.size(); ++i) {
      CHECK(g.h[i] > 0.0);
      hm += g.h[i] * g.m[i];
    }
    CHECK(hm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.q_gibbs >= 1.0);

    // μ on state cylinders is stationary: μ([b]) = Σ over one-step preimages.
    const auto& graph = g.graph;
    std::vector<double> mass(graph.size(), 0.0);
    for (const auto& e : graph.edges()) {
      Word w = graph.states()[e.row];
      w.push_back(graph.states()[e.col].back());
      mass[e.col] += cylinder_measure(g, MeasureKind::Equilibrium, w);
    }
    for (std::size_t b = 0; b < graph.size(); ++b) CHECK(mass[b] == doctest::Approx(g.mu[b]).epsilon(1e-10));
  }
}

TEST_CASE("cylinder measures") {
  const auto cantor = load_system("cantor13");
  const auto g = gibbs_profile(cantor.subshift(), cantor.potential, kLog2 / kLog3);
  CHECK(cylinder_measure(g, MeasureKind::Eigen, Word{0, 1, 1, 0}) == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(cylinder_measure(g, MeasureKind::Eigen, Word{1}) == doctest::Approx(0.5).epsilon(1e-12));

  for (const char* name : {"golden_half", "toy_depth2"}) {
    const auto sys = load_system(name);
    const auto gs = gibbs_profile(sys.subshift(), sys.potential, find_delta(sys.subshift(), sys.potential).delta);
    for (std::size_t n = 1; n <= 5; ++n) {
      for (const auto& w : admissible_words(sys.subshift(), n)) {
        double children = 0.0;
        for (Symbol e : sys.subshift().successors(w.back())) {
          Word c = w;
          c.push_back(e);
          children += cylinder_measure(gs, MeasureKind::Eigen, c);
        }
        CHECK(children == doctest::Approx(cylinder_measure(gs, MeasureKind::Eigen, w)).epsilon(1e-12));
      }
    }
  }

  const auto golden = load_system("golden_half");
  const auto gg = gibbs_profile(golden.subshift(), golden.potential, 1.0);
  CHECK_THROWS_AS(cylinder_measure(gg, MeasureKind::Eigen, Word{1, 1}), Error);
}

TEST_CASE("lyapunov exponent") {
  const auto cantor = load_system("cantor13");
  const auto pc = thermo_profile(cantor.subshift(), cantor.potential);
  CHECK(pc.chi == doctest::Approx(kLog3).epsilon(1e-12));

  const auto tt = load_system("two_three");
  const auto pt = thermo_profile(tt.subshift(), tt.potential);
  const double expected = std::pow(2.0, -pt.delta) * kLog2 + std::pow(3.0, -pt.delta) * kLog3;
  CHECK(pt.chi == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(pt.chi - pt.chi_finite_difference) <= 1e-6 * pt.chi);

  for (const char* name : {"golden_half", "toy_depth2"}) {
    const auto sys = load_system(name);
    const auto p = thermo_profile(sys.subshift(), sys.potential);
    CHECK(p.chi > 0.0);
    CHECK(std::abs(p.chi - p.chi_finite_difference) <= 1e-6 * p.chi);
  }

  // Scaling f by c at parameter x/c keeps the measure, so the integral scales by c.
  const auto g = gibbs_profile(tt.subshift(), tt.potential, 0.6);
  const auto scaled = gibbs_profile(tt.subshift(), tt.potential.scaled(3.0), 0.2);
  CHECK(lyapunov(scaled) == doctest::Approx(3.0 * lyapunov(g)).epsilon(1e-12));
}

TEST_CASE("recoding leaves thermodynamic data unchanged") {
  const auto toy = load_system("toy_depth2");
  const auto rec = block_recode(toy.subshift(), toy.potential);
  const auto direct = thermo_profile(toy.subshift(), toy.potential);
  const auto recoded = thermo_profile(rec.shift.subshift, rec.potential);
  CHECK(std::abs(direct.delta - recoded.delta) <= 1e-12);
  CHECK(std::abs(direct.chi - recoded.chi) <= 1e-12);
  for (Symbol e = 0; e < 2; ++e) {
    double lifted = 0.0;
    for (std::size_t b = 0; b < rec.blocks.size(); ++b)
      if (rec.blocks[b].front() == e) lifted += cylinder_measure(recoded.gibbs, MeasureKind::Eigen, Word{static_cast<Symbol>(b)});
    CHECK(cylinder_measure(direct.gibbs, MeasureKind::Eigen, Word{e}) == doctest::Approx(lifted).epsilon(1e-12));
  }
}
