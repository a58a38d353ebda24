#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thermoform/potential.hpp"
#include "thermoform/shift.hpp"
#include "thermoform/transfer.hpp"

namespace thermoform {

enum class SpectralKind { DGeneric, Lattice };

std::string to_string(SpectralKind kind);

struct SpectralVerdict {
  SpectralKind kind = SpectralKind::DGeneric;
  /// Lattice generator Δ; zero for D-generic systems.
  double gap = 0.0;
  /// Smallest y > 0 with eigenvalue 1 on the critical line: 2π/Δ, or ∞.
  double y1 = std::numeric_limits<double>::infinity();
  /// y1 / 2π.
  double y0 = std::numeric_limits<double>::infinity();
  /// Periodic Birkhoff sums S_{|ω|} f(ω̄) over the simple cycles used as evidence.
  std::vector<double> cycle_sums;
  /// Absolute tolerance of the real gcd (relative to the largest |sum|).
  double tolerance = 1e-9;
  /// Generators below this are indistinguishable from D-generic.
  double resolution = 0.0;
  /// Largest |sum - k Δ| over the evidence (lattice only).
  double max_residual = 0.0;
};

/// Euclid's algorithm on nonnegative reals with symmetric remainders;
/// stops once the remainder drops to `eps` or below.
double real_gcd(double a, double b, double eps);

/// Periodic Birkhoff sums of the simple cycles of the transfer graph,
/// rooted at their smallest state. At most `cap` cycles are collected.
std::vector<double> simple_cycle_sums(const TransferGraph& graph, std::size_t cap = 20000);

/// Decides whether the periodic sums generate a cyclic subgroup of ℝ.
/// A surviving generator must be at least sqrt(tol)·max|sum| and fit
/// every sum within tol·max|sum|; otherwise the verdict is DGeneric.
SpectralVerdict d_generic_test(const Subshift& sub, const LocallyConstantPotential& f, double tol = 1e-9);

/// Eigenvalue of maximum modulus of C_s by complex power iteration with
/// random restarts; a dense eigen-solve is the last resort.
struct LeadingEigenvalue {
  std::complex<double> value;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  bool dense_fallback = false;
};
LeadingEigenvalue leading_eigenvalue(const TransferGraph& graph, std::complex<double> s, std::uint64_t seed = 0,
                                     double tolerance = 1e-11);

struct ScanPoint {
  double y = 0.0;
  std::complex<double> lambda;
  double modulus = 0.0;
  bool near_one = false;  ///< |λ - 1| < 1e-6 at this grid point
  bool ok = true;
  std::string error;
};

struct CriticalLineScan {
  std::vector<ScanPoint> points;
  /// Refined locations y > 0 where λ(δ + iy) = 1 to within 1e-6.
  std::vector<double> crossings;
  double max_modulus = 0.0;
  bool modulus_bound_holds = true;  ///< max |λ| <= 1 + 1e-9
  std::size_t failed_points = 0;
};

/// Scans y on the grid y_max·j/n_points, j = 1..n_points. Local minima of
/// |λ - 1| are refined by golden-section search.
CriticalLineScan critical_line_scan(const Subshift& sub, const LocallyConstantPotential& f, double delta, double y_max,
                                    std::size_t n_points, std::uint64_t seed = 0);

struct TauberianConstants {
  double c_delta = 0.0;
  double c_1 = 0.0;
  double c_2 = 0.0;
  /// y0^{-1}; zero for D-generic systems.
  double upper_addend = 0.0;
};

TauberianConstants tauberian_constants(double delta, const SpectralVerdict& verdict);
/// The same constants for an explicit y0 (∞ allowed).
TauberianConstants tauberian_constants(double delta, double y0);

}  // namespace thermoform
