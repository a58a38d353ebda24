// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance --only N   run criterion N alone (exit status reflects it)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "systems.hpp"
#include "thermoform/counting.hpp"
#include "thermoform/error.hpp"
#include "thermoform/poincare.hpp"
#include "thermoform/spectral.hpp"
#include "thermoform/thermo.hpp"

using namespace thermoform;
using testing_support::kLog2;
using testing_support::kLog3;
using testing_support::load_system;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; failures are listed first in the detail line.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
  template <class T>
  void note(const std::string& key, T value) {
    detail << key << "=" << value << "; ";
  }
};

struct Criterion {
  int id;
  std::string title;
  std::function<void(Outcome&)> run;
};

std::string g(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

CountQuery plain(const SystemConfig& sys, double t, TargetSet target = TargetSet::all()) {
  CountQuery q;
  q.kind = CountKind::Plain;
  q.tail = sys.tail;
  q.target = std::move(target);
  q.threshold = t;
  return q;
}

// Root of 2^{-x} + 3^{-x} = 1 from the closed-form pressure, independent of
// the transfer-matrix machinery.
double two_three_root() {
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::pow(2.0, -mid) + std::pow(3.0, -mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void cantor_counts(Outcome& out) {
  const auto cantor = load_system("cantor13");
  const double delta = find_delta(cantor.subshift(), cantor.potential).delta;
  const double err = std::abs(delta - kLog2 / kLog3);
  out.require(err <= 1e-12, "delta = log2/log3 within 1e-12");
  out.note("delta", g(delta, 15));

  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ut(0.0, 20 * kLog3);
  int mismatches = 0;
  std::uint64_t largest = 0;
  for (int i = 0; i < 50; ++i) {
    double t = ut(rng);
    if (t == 0.0) t = 1e-3;
    const auto n = static_cast<int>(std::floor(t / kLog3));
    const std::uint64_t expected = (std::uint64_t{1} << (n + 1)) - 2;
    const std::uint64_t got = count(cantor.subshift(), cantor.potential, plain(cantor, t));
    largest = std::max(largest, got);
    if (got != expected) ++mismatches;
  }
  out.require(mismatches == 0, "closed-form count at 50 random T");
  out.note("mismatches", mismatches);
  out.note("largest_count", largest);
}

void sharp_sandwich(Outcome& out) {
  const auto cantor = load_system("cantor13");
  const auto rep = asymptotic_report(cantor.subshift(), cantor.potential, cantor.tail, TargetSet::all(), 13 * kLog3,
                                     20 * kLog3);
  out.require(std::abs(rep.lower_bound - 1.0) <= 1e-12, "lower bound = 1");
  out.require(std::abs(rep.upper_bound - 2.0) <= 1e-12, "upper bound = 2");
  out.require(rep.empirical_liminf >= 1.0 - 1e-3 && rep.empirical_liminf <= 1.0, "liminf in [1 - 1e-3, 1]");
  out.require(rep.empirical_limsup >= 2.0 - 1e-3 && rep.empirical_limsup <= 2.0, "limsup in [2 - 1e-3, 2]");
  out.note("bounds", "[" + g(rep.lower_bound, 15) + ", " + g(rep.upper_bound, 15) + "]");
  out.note("extrema", "[" + g(rep.empirical_liminf) + ", " + g(rep.empirical_limsup) + "]");
}

void subsequence_limits(Outcome& out) {
  const auto cantor = load_system("cantor13");
  const double delta = kLog2 / kLog3;
  const int n = 14;
  for (double a : {0.0, 0.25, 0.5, 1.0}) {
    const double t = (n + a) * kLog3;
    // A = 1 lands on a jump; the limit 2^{1-A} = 1 is the value from the
    // left, since the right value already belongs to the A = 0 family.
    const double t_eval = a == 1.0 ? t - 1e-9 : t;
    const auto got = count(cantor.subshift(), cantor.potential, plain(cantor, t_eval));
    const double ratio = static_cast<double>(got) * std::exp(-delta * t);
    const double limit = std::pow(2.0, 1.0 - a);
    const double dev = std::abs(ratio / limit - 1.0);
    out.require(dev <= 0.01, "A=" + g(a) + " within 1%");
    out.note("A=" + g(a), g(ratio, 8) + " vs " + g(limit, 4));
  }
}

void d_generic(Outcome& out) {
  const auto tt = load_system("two_three");
  const auto verdict = d_generic_test(tt.subshift(), tt.potential);
  out.require(verdict.kind == SpectralKind::DGeneric, "verdict DGeneric");

  const auto profile = thermo_profile(tt.subshift(), tt.potential);
  const double oracle = two_three_root();
  out.require(std::abs(profile.delta - oracle) <= 1e-12, "delta vs bisection oracle within 1e-12");
  const double chi_rel = std::abs(profile.chi - profile.chi_finite_difference) / profile.chi;
  out.require(chi_rel <= 1e-6, "chi vs -P'(delta) within 1e-6");

  // The report window ends at T = 18; the single-limit check looks at the
  // last 10 jumps before that point.
  const auto rep = asymptotic_report(tt.subshift(), tt.potential, tt.tail, TargetSet::all(), 9.0, 18.0);
  const double limit = 1.0 / (profile.delta * profile.chi);
  out.require(std::abs(rep.lower_bound - limit) <= 1e-12 * limit, "report limit = 1/(delta chi)");
  out.require(rep.single_limit_holds, "last 10 jump ratios within 5% of 1/(delta chi)");
  out.note("delta", g(profile.delta, 15));
  out.note("chi", g(profile.chi, 15));
  out.note("limit", g(limit));
  out.note("max_deviation", g(rep.single_limit_max_deviation, 4));
}

void residues(Outcome& out) {
  const auto tt = load_system("two_three");
  for (const char* name : {"all", "zero", "one"}) {
    const auto r = residue_estimate(tt.subshift(), tt.potential, tt.tail, tt.target(name));
    out.require(r.relative_error() <= 1e-3, std::string("residue for ") + name);
    out.note(name, g(r.estimate, 8) + " vs " + g(r.predicted, 8));
  }
}

void spectral_scan(Outcome& out) {
  const std::uint64_t seed = 0;
  double worst_modulus = 0.0;
  for (const char* name : {"cantor13", "golden_half"}) {
    const auto sys = load_system(name);
    const double delta = find_delta(sys.subshift(), sys.potential).delta;
    const auto verdict = d_generic_test(sys.subshift(), sys.potential);
    out.require(verdict.kind == SpectralKind::Lattice, std::string(name) + " lattice");
    const auto scan = critical_line_scan(sys.subshift(), sys.potential, delta, 20.0, 2000, seed);
    worst_modulus = std::max(worst_modulus, scan.max_modulus);
    out.require(scan.modulus_bound_holds && scan.failed_points == 0, std::string(name) + " modulus bound");
    const double predicted = 2 * std::numbers::pi / verdict.gap;
    if (scan.crossings.empty()) {
      out.require(false, std::string(name) + " has a crossing");
      continue;
    }
    out.require(std::abs(scan.crossings.front() - predicted) <= 1e-6, std::string(name) + " first crossing at 2pi/gap");
    out.note(std::string(name) + "_crossing", g(scan.crossings.front(), 13) + " vs " + g(predicted, 13));
  }
  const auto tt = load_system("two_three");
  const double delta = find_delta(tt.subshift(), tt.potential).delta;
  const auto scan = critical_line_scan(tt.subshift(), tt.potential, delta, 20.0, 2000, seed);
  worst_modulus = std::max(worst_modulus, scan.max_modulus);
  out.require(scan.crossings.empty(), "two_three has no crossing on (0, 20]");
  out.require(scan.modulus_bound_holds && scan.failed_points == 0, "two_three modulus bound");
  out.note("max_modulus", g(worst_modulus, 15));
}

void gibbs_property(Outcome& out) {
  for (const char* name : {"cantor13", "two_three", "golden_half"}) {
    const auto sys = load_system(name);
    const auto& sub = sys.subshift();
    const double delta = find_delta(sub, sys.potential).delta;
    const auto state = gibbs_profile(sub, sys.potential, delta);
    const double q = state.q_gibbs;
    // Independent pass over every cylinder up to length 12: the ratio with
    // the smallest continuation as ρ must sit in [1/Q, Q].
    double lo = 1.0, hi = 1.0;
    std::size_t cylinders = 0;
    for (std::size_t n = 1; n <= 12; ++n) {
      for (const auto& w : admissible_words(sub, n)) {
        const TailPoint rho = smallest_continuation(sub, std::span<const Symbol>(&w.back(), 1)).shifted(1);
        const double s = birkhoff_sum(sys.potential, sub, w, rho);
        const double ratio = cylinder_measure(state, MeasureKind::Eigen, w) /
                             std::exp(delta * s - state.pressure * static_cast<double>(n));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        ++cylinders;
      }
    }
    const double tol = 1e-12;
    out.require(lo >= (1.0 / q) * (1.0 - tol) && hi <= q * (1.0 + tol), std::string(name) + " sandwich with observed Q");
    if (std::string(name) != "golden_half") out.require(std::abs(q - 1.0) <= 1e-12, std::string(name) + " Q = 1");
    out.note(std::string(name) + "_Q", g(q, 15));
    out.note(std::string(name) + "_cylinders", cylinders);
  }
}

void oracle_equivalence(Outcome& out) {
  const std::vector<std::string> names{"cantor13", "two_three", "golden_half", "toy_depth2", "two_three_overlap"};
  std::vector<SystemConfig> systems;
  for (const auto& n : names) systems.push_back(load_system(n));
  const std::vector<CountKind> kinds{CountKind::Plain, CountKind::InitialBlock, CountKind::FixedLength,
                                     CountKind::Periodic, CountKind::PeriodicFixedLength};
  std::mt19937_64 rng(202);
  int mismatches = 0;
  std::uint64_t largest = 0;
  for (int i = 0; i < 200; ++i) {
    const auto& sys = systems[static_cast<std::size_t>(i) % systems.size()];
    const CountKind kind = kinds[static_cast<std::size_t>(i / static_cast<int>(systems.size())) % kinds.size()];
    // Thresholds keep the oracle's length bound at or below 14.
    const double t_max = 14.0 * -sys.potential.max_weight();
    CountQuery q;
    q.kind = kind;
    q.threshold = std::uniform_real_distribution<double>(0.0, t_max)(rng);
    if (!is_periodic(kind)) q.tail = sys.tail;
    const int pick = std::uniform_int_distribution<int>(0, 2)(rng);
    q.target = sys.target(pick == 0 ? "all" : pick == 1 ? "zero" : "one");
    if (kind == CountKind::FixedLength || kind == CountKind::PeriodicFixedLength)
      q.length = std::uniform_int_distribution<std::size_t>(1, 14)(rng);
    const auto fast = count(sys.subshift(), sys.potential, q);
    const auto slow = count_oracle(sys.subshift(), sys.potential, q);
    largest = std::max(largest, fast);
    if (fast != slow) {
      ++mismatches;
      out.note("mismatch", sys.name + "/" + to_string(kind) + "/T=" + g(q.threshold));
    }
  }
  out.require(mismatches == 0, "count = count_oracle on 200 queries");
  out.note("queries", 200);
  out.note("largest_count", largest);
}

void length_asymptotics(Outcome& out) {
  const auto tt = load_system("two_three");
  const double t = 40.0;
  const auto e = length_extremes(tt.subshift(), tt.potential, tt.tail, t);
  const double m_ratio = static_cast<double>(e.shortest_cutoff) / t;
  const double big_ratio = static_cast<double>(e.longest) / t;
  out.require(std::abs(m_ratio * kLog3 - 1.0) <= 0.05, "m(40)/40 within 5% of 1/log3");
  out.require(std::abs(big_ratio * kLog2 - 1.0) <= 0.05, "M(40)/40 within 5% of 1/log2");
  out.note("m(40)", e.shortest_cutoff);
  out.note("M(40)", e.longest);

  const auto cantor = load_system("cantor13");
  std::mt19937_64 rng(303);
  int mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    const double tc = std::uniform_real_distribution<double>(0.5, 40.0)(rng);
    const auto expected = static_cast<std::size_t>(std::floor(tc / kLog3));
    const auto ec = length_extremes(cantor.subshift(), cantor.potential, cantor.tail, tc);
    if (ec.shortest_cutoff != expected || ec.longest != expected) ++mismatches;
  }
  out.require(mismatches == 0, "cantor m(T) = M(T) = floor(T/log3) at 20 random T");
}

void comparison_lemmas(Outcome& out) {
  const std::vector<std::string> required{"per-fixed-length", "per-initial-block-lower", "per-cylinder-upper"};
  for (const char* name : {"two_three", "toy_depth2"}) {
    const auto sys = load_system(name);
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    for (Symbol tau : {Symbol{0}, Symbol{1}}) {
      for (std::size_t q : {1, 2, 3}) {
        for (double t : {4.0, 6.0, 8.0}) {
          const auto rep = verify_comparison_lemmas(sys.subshift(), sys.potential, Word{tau}, q, t);
          for (const auto& c : rep.checks) {
            if (std::find(required.begin(), required.end(), c.name) == required.end()) continue;
            ++evaluated;
            min_slack = std::min(min_slack, c.slack());
            if (c.slack() < 0.0)
              out.require(false, std::string(name) + " " + c.name + " tau=" + std::to_string(tau) +
                                     " q=" + std::to_string(q) + " T=" + g(t));
          }
        }
      }
    }
    out.require(evaluated == 3 * 18, std::string(name) + " evaluated all inequalities");
    out.note(std::string(name) + "_min_slack", g(min_slack));
  }
}

void recoding_invariance(Outcome& out) {
  const auto toy = load_system("toy_depth2");
  const auto rec = block_recode(toy.subshift(), toy.potential);
  const auto direct = thermo_profile(toy.subshift(), toy.potential);
  const auto recoded = thermo_profile(rec.shift.subshift, rec.potential);
  out.require(std::abs(direct.delta - recoded.delta) <= 1e-12, "delta agrees to 1e-12");
  out.require(std::abs(direct.chi - recoded.chi) <= 1e-12, "chi agrees to 1e-12");

  std::mt19937_64 rng(404);
  int mismatches = 0;
  const TailPoint lifted_tail = rec.lift_tail(toy.tail);
  for (int i = 0; i < 20; ++i) {
    const double t = std::uniform_real_distribution<double>(0.5, 24.0)(rng);
    CountQuery q = plain(toy, t);
    const auto a = count(toy.subshift(), toy.potential, q);
    q.tail = lifted_tail;
    const auto b = count(rec.shift.subshift, rec.potential, q);
    if (a != b) ++mismatches;
  }
  out.require(mismatches == 0, "N(T) identical at 20 random T");
  out.note("delta", g(direct.delta, 15));
  out.note("chi", g(direct.chi, 15));
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "Cantor dimension and closed-form counts", cantor_counts},
      {2, "Cantor sharp sandwich bounds", sharp_sandwich},
      {3, "Cantor subsequence limit points", subsequence_limits},
      {4, "D-generic verdict, delta, chi and single limit", d_generic},
      {5, "Poincare residues", residues},
      {6, "Critical-line scan consistency", spectral_scan},
      {7, "Gibbs property", gibbs_property},
      {8, "Pruned count equals oracle", oracle_equivalence},
      {9, "Length asymptotics", length_asymptotics},
      {10, "Comparison inequalities", comparison_lemmas},
      {11, "Block recoding invariance", recoding_invariance},
  };

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.2fs) | %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion numbered %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
