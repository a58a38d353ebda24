#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "thermoform/counting.hpp"
#include "thermoform/potential.hpp"
#include "thermoform/shift.hpp"
#include "thermoform/spectral.hpp"

namespace thermoform {

enum class SeriesMode { ClosedForm, Truncated };

struct PoincareValue {
  std::complex<double> value;
  /// Bound on |remainder| for Truncated mode; zero for ClosedForm.
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

/// η_ρ([H], s) = Σ_{n>=1} L_s^n 1_[H] (ρ). The operator is taken on words of
/// length max(depth - 1, 1, longest target word), so 1_[H] is a state
/// function. ClosedForm solves (I - L_s) x = 1_[H] densely and returns
/// x(ρ) - 1_[H](ρ); Truncated sums `terms` powers.
/// Throws OnOrLeftOfCriticalLine when Re s <= delta, SingularResolvent.
PoincareValue poincare_series(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                              const TargetSet& target, std::complex<double> s, double delta,
                              SeriesMode mode = SeriesMode::ClosedForm, std::size_t terms = 200);

/// Same, computing δ first.
PoincareValue poincare_series(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                              const TargetSet& target, std::complex<double> s,
                              SeriesMode mode = SeriesMode::ClosedForm, std::size_t terms = 200);

struct ResidueEstimate {
  std::array<double, 3> offsets{1e-2, 1e-3, 1e-4};
  std::array<double, 3> samples{};  ///< (x - δ) η(x) at x = δ + offset
  double estimate = 0.0;            ///< two-level Richardson extrapolation to offset 0
  double predicted = 0.0;           ///< h(ρ) m([H]) / χ
  double relative_error() const noexcept;
};

ResidueEstimate residue_estimate(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                                 const TargetSet& target);

struct AsymptoticReport {
  double delta = 0.0;
  double chi = 0.0;
  double h_rho = 0.0;
  double m_target = 0.0;
  SpectralVerdict spectral;
  TauberianConstants constants;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double lower_bound = 0.0;  ///< c_δ h(ρ) m(B) / χ
  double upper_bound = 0.0;  ///< lower + y0^{-1} h(ρ) / χ
  double empirical_liminf = 0.0;
  double empirical_limsup = 0.0;
  double tolerance = 0.02;
  bool lower_holds = false;  ///< lower <= liminf (1 + tol)
  bool upper_holds = false;  ///< limsup <= upper (1 + tol)
  /// D-generic only: ratio_after at the last 10 jumps within 5% of the
  /// single limit. A finite-T heuristic; no rate is known.
  bool single_limit_checked = false;
  bool single_limit_holds = true;
  double single_limit_max_deviation = 0.0;
  std::size_t jumps_in_window = 0;
  CountSeries series;

  bool all_hold() const noexcept { return lower_holds && upper_holds && single_limit_holds; }
};

/// Sandwich check of N_ρ(B, T) e^{-δT} over the window [t_lo, t_hi]. The
/// extrema are taken over the trailing half of the window. Throws
/// WindowTooSmall when fewer than 10 jumps occur up to t_hi or none in the
/// window.
AsymptoticReport asymptotic_report(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                                   const TargetSet& target, double t_lo, double t_hi,
                                   const CountOptions& options = {});

}  // namespace thermoform
