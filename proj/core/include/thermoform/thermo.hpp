#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "thermoform/potential.hpp"
#include "thermoform/shift.hpp"
#include "thermoform/transfer.hpp"

namespace thermoform {

struct PerronOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 100000;
  /// Plain iterations before switching to the shifted matrix C + I, which
  /// is primitive whenever C is irreducible.
  std::size_t plain_iterations = 2000;
};

/// Leading eigen-data of the nonnegative irreducible matrix C_x.
struct PerronData {
  double lambda = 0.0;
  std::vector<double> right;  ///< Cv = λv, normalized to sum 1 (m-direction)
  std::vector<double> left;   ///< uᵀC = λuᵀ, normalized so Σ u_i v_i = 1 (h-direction)
  std::size_t iterations = 0;
};

/// Power iteration with Collatz–Wielandt stopping: stops when
/// max_i (Cv)_i / v_i - min_i (Cv)_i / v_i <= tolerance * λ. Throws
/// NoConvergence.
PerronData perron_data(const TransferGraph& graph, double x, const PerronOptions& options = {});
PerronData perron_data(const Subshift& sub, const LocallyConstantPotential& f, double x,
                       const PerronOptions& options = {});

/// x ↦ P(x) = log λ(x).
class PressureFunction {
 public:
  PressureFunction(const Subshift& sub, const LocallyConstantPotential& f) : graph_(sub, f) {}
  explicit PressureFunction(TransferGraph graph) : graph_(std::move(graph)) {}

  double operator()(double x) const { return std::log(perron_data(graph_, x).lambda); }
  const TransferGraph& graph() const noexcept { return graph_; }

 private:
  TransferGraph graph_;
};

double pressure(const Subshift& sub, const LocallyConstantPotential& f, double x);

/// (1/n) log Σ_{ω ∈ E_A^n} exp(x · sup_{[ω]} S_n f) for n = 1..n_max, by
/// direct enumeration. Converges to P(x) at rate O(1/n).
std::vector<double> fekete_sequence(const Subshift& sub, const LocallyConstantPotential& f, double x,
                                    std::size_t n_max);

struct DeltaResult {
  double delta = 0.0;
  double pressure_at_delta = 0.0;
  double pressure_at_zero = 0.0;
  std::size_t bisections = 0;
};

/// Bowen root: the unique zero of P. Requires strictly negative weights
/// (NonNegativeWeight) and P(0) = log r(A) > 0 (NotRegular).
DeltaResult find_delta(const Subshift& sub, const LocallyConstantPotential& f);

/// Eigenmeasure, eigenfunction and equilibrium state at parameter x, all
/// expressed on the states of the transfer graph (1-cylinders at depth 1).
struct GibbsState {
  double x = 0.0;
  double lambda = 0.0;
  double pressure = 0.0;
  std::vector<double> m;   ///< m([state]), sums to 1
  std::vector<double> h;   ///< h on state cylinders, Σ h m = 1
  std::vector<double> mu;  ///< μ([state]) = h m
  double q_gibbs = 1.0;    ///< observed Gibbs constant
  std::size_t q_scan_length = 0;
  TransferGraph graph;
};

struct GibbsOptions {
  std::size_t scan_length = 12;
  /// Upper bound on the number of cylinders visited by the Q scan.
  std::size_t scan_budget = 4'000'000;
};

GibbsState gibbs_profile(const Subshift& sub, const LocallyConstantPotential& f, double x,
                         const GibbsOptions& options = {});

enum class MeasureKind { Eigen, Equilibrium };

/// m([w]) or μ([w]) for an admissible word. Throws Inadmissible.
double cylinder_measure(const GibbsState& state, MeasureKind which, std::span<const Symbol> w);

/// Per-symbol marginals: Σ over states beginning with e.
std::vector<double> one_cylinder_marginals(const GibbsState& state, std::span<const double> per_state);

/// χ = -∫ f dμ.
double lyapunov(const GibbsState& state);

/// Extrema of m([ω]) exp(nP - x S_n f(ωρ)) over cylinders up to the scan
/// length and all continuations ρ.
struct GibbsScan {
  double min_ratio = 1.0;
  double max_ratio = 1.0;
  std::size_t length = 0;
  std::size_t cylinders = 0;
  double q() const noexcept { return std::max(max_ratio, 1.0 / min_ratio); }
};
GibbsScan gibbs_scan(const GibbsState& state, std::size_t max_length, std::size_t budget = 4'000'000);

/// Everything at the Bowen root.
struct ThermoProfile {
  double delta = 0.0;
  double pressure_at_delta = 0.0;
  GibbsState gibbs;
  double chi = 0.0;
  /// -P'(δ) by central difference with step 1e-6.
  double chi_finite_difference = 0.0;
};

ThermoProfile thermo_profile(const Subshift& sub, const LocallyConstantPotential& f, const GibbsOptions& options = {});

}  // namespace thermoform
