#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "thermoform/potential.hpp"
#include "thermoform/shift.hpp"

namespace thermoform {

/// One nonzero entry C[row][col] = exp(x * weight) of the weighted
/// incidence matrix. `col` is the state of ρ, `row` the state of eρ.
struct TransferEdge {
  std::size_t row = 0;
  std::size_t col = 0;
  double weight = 0.0;
};

/// The transfer operator L_x restricted to functions of the first
/// `state_length` coordinates, as a sparse matrix over admissible
/// state words. For a depth-1 potential with state_length 1 this is
/// C[e][b] = A[e][b] * exp(x f_e).
///
/// Orientation: right eigenvectors carry the eigenmeasure (m([eω]) =
/// e^{-P} e^{x f_e} m([ω])), left eigenvectors carry the eigenfunction h.
class TransferGraph {
 public:
  /// state_length 0 selects max(depth - 1, 1). Must be >= depth - 1.
  TransferGraph(const Subshift& sub, const LocallyConstantPotential& f, std::size_t state_length = 0);

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t state_length() const noexcept { return length_; }
  const std::vector<Word>& states() const noexcept { return states_; }
  const std::vector<TransferEdge>& edges() const noexcept { return edges_; }
  const Subshift& subshift() const noexcept { return sub_; }
  const LocallyConstantPotential& potential() const noexcept { return f_; }

  /// State index of the first state_length() symbols of `word`.
  std::size_t state_of(std::span<const Symbol> word) const;
  std::size_t state_of(const TailPoint& point) const;

  std::vector<double> apply(double x, std::span<const double> v) const;
  std::vector<double> apply_transpose(double x, std::span<const double> u) const;
  std::vector<std::complex<double>> apply(std::complex<double> s, std::span<const std::complex<double>> v) const;

  /// Dense row-major copy of C_s.
  std::vector<std::complex<double>> dense(std::complex<double> s) const;

 private:
  Subshift sub_;
  LocallyConstantPotential f_;
  std::size_t length_ = 1;
  std::vector<Word> states_;
  std::vector<std::size_t> state_index_;
  std::vector<TransferEdge> edges_;
};

}  // namespace thermoform
