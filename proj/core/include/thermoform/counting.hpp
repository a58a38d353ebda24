#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermoform/potential.hpp"
#include "thermoform/shift.hpp"

namespace thermoform {

/// Birkhoff sums are compared as S >= -T - kThresholdSlack so that a word
/// whose sum lands exactly on a jump (for example n·log 3) is counted there
/// despite rounding in the accumulated logs. Jump locations closer than
/// the same slack are merged.
inline constexpr double kThresholdSlack = 1e-10;

enum class CountKind {
  Plain,                 ///< N_ρ([H], T): ωρ ∈ [H], S_{|ω|} f(ωρ) >= -T
  InitialBlock,          ///< N_ρ(H, T): pairs (τ ∈ H, ω) with τωρ admissible, S_{|τω|} f(τωρ) >= -T
  FixedLength,           ///< N_ρ([H], q, T): Plain restricted to |ω| = q
  Periodic,              ///< N_per([H], T): ω periodic, ω̄ ∈ [H], S_{|ω|} f(ω̄) >= -T
  PeriodicInitialBlock,  ///< N_per(H, T): pairs (τ ∈ H, ω) with τω periodic, S f(overline{τω}) >= -T
  PeriodicFixedLength,   ///< N_per([H], q, T): Periodic restricted to |ω| = q
};

std::string to_string(CountKind kind);
std::optional<CountKind> parse_count_kind(std::string_view text);
bool is_periodic(CountKind kind);

struct CountQuery {
  CountKind kind = CountKind::Plain;
  /// Required for the non-periodic kinds.
  std::optional<TailPoint> tail;
  /// [H] for cylinder kinds, the initial blocks H for the InitialBlock kinds
  /// (All means every single symbol).
  TargetSet target = TargetSet::all();
  /// Word length q for the fixed-length kinds.
  std::size_t length = 0;
  double threshold = 0.0;
};

struct CountOptions {
  unsigned threads = 1;
};

/// Exact count by lexicographic pruned depth-first search. A prefix w is
/// pruned once S_{|w|} f(w·c) + K_f < -T, where c is the smallest
/// admissible continuation; at depth 1, K_f = 0 and the bound is the exact
/// partial sum. Throws NonNegativeWeight, Inadmissible, BadQuery.
std::uint64_t count(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& query,
                    const CountOptions& options = {});

/// Brute force: every admissible word up to the length bound
/// floor(T / |max f|), each sum recomputed from scratch. Throws
/// CapExceeded after `cap` candidate words.
std::uint64_t count_oracle(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& query,
                           std::uint64_t cap = 20'000'000);

/// b_n = min and d_n = max of S_n f(ωρ) over admissible ω of length n,
/// n = 1..n_max, by dynamic programming over state words.
struct ExtremalSums {
  std::vector<double> minimum;  ///< b_1..b_{n_max}
  std::vector<double> maximum;  ///< d_1..d_{n_max}
};
ExtremalSums extremal_sums(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& tail,
                           std::size_t n_max);

struct LengthExtremes {
  std::size_t shortest_cutoff = 0;  ///< m(T): every word up to this length is counted
  std::size_t longest = 0;          ///< M(T): longest counted word
};

/// m(T) = last n with b_n >= -T and M(T) = last n with d_n >= -T. Both
/// sequences strictly decrease, so M(T) is also the deepest word the
/// pruned search counts (probe_length reports that value for comparison).
LengthExtremes length_extremes(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& tail,
                               double threshold);

struct SeriesRow {
  double t = 0.0;
  std::uint64_t before = 0;
  std::uint64_t after = 0;
  double ratio_before = 0.0;
  double ratio_after = 0.0;
};

/// Jump points of T ↦ N(T) on a window, with e^{δT}-normalized one-sided values.
struct CountSeries {
  std::vector<SeriesRow> rows;
  double delta = 0.0;
};

/// All jump locations -S ≤ t_hi are collected in one search; rows are
/// emitted for jumps in [t_lo, t_hi]. The query's threshold is ignored.
CountSeries count_series(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& query, double t_lo,
                         double t_hi, double delta, const CountOptions& options = {});

/// The point w·w⁺ where w⁺ follows the lexicographically smallest
/// successor at every step.
TailPoint smallest_continuation(const Subshift& sub, std::span<const Symbol> w);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const noexcept { return rhs - lhs; }
};

struct ComparisonReport {
  double k = 0.0;      ///< K = K_f
  double decay = 0.0;  ///< K e^{-(|τ|+q)α}
  std::vector<InequalityCheck> checks;
  bool all_hold() const noexcept;
};

/// Evaluates both sides of the periodic-versus-tail comparison
/// inequalities for the word τ and block length q, plus the whole-space
/// bound with ρ = ττ⁺ and F the first half of E_A^q.
ComparisonReport verify_comparison_lemmas(const Subshift& sub, const LocallyConstantPotential& f,
                                          std::span<const Symbol> tau, std::size_t q, double threshold);

/// Empirical table of N_ρ(i, T) for m(T) <= i <= M(T).
struct LengthProbeRow {
  std::size_t length = 0;
  std::uint64_t count = 0;
  double ratio_total = 0.0;  ///< N_ρ(T) / N_ρ(i, T)
};
struct LengthProbe {
  double threshold = 0.0;
  LengthExtremes extremes;
  std::size_t deepest_counted = 0;  ///< longest word counted by the search
  std::uint64_t total = 0;
  std::vector<LengthProbeRow> rows;
};
LengthProbe probe_length(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& tail,
                         double threshold);

}  // namespace thermoform
