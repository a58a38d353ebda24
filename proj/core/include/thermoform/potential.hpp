#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "thermoform/shift.hpp"

namespace thermoform {

/// f(ρ) = weight(ρ_1 … ρ_d): a potential depending on the first `depth`
/// coordinates. Weights are stored densely, indexed by the base-|E|
/// encoding of the d-word; inadmissible slots are unused.
class LocallyConstantPotential {
 public:
  /// Throws BadPotential unless the table has exactly one finite weight per
  /// admissible d-word.
  static LocallyConstantPotential from_table(const Subshift& sub, std::size_t depth,
                                             const std::map<Word, double>& table);
  /// Depth-1 potential from per-symbol weights.
  static LocallyConstantPotential per_symbol(const Subshift& sub, std::span<const double> weights);

  std::size_t depth() const noexcept { return depth_; }
  std::size_t alphabet_size() const noexcept { return n_; }

  double weight(std::span<const Symbol> window) const noexcept { return weights_[index(window)]; }
  double weight_at(std::size_t index) const noexcept { return weights_[index]; }
  std::size_t index(std::span<const Symbol> window) const noexcept {
    std::size_t i = 0;
    for (std::size_t k = 0; k < depth_; ++k) i = i * n_ + window[k];
    return i;
  }

  /// Admissible d-words in lexicographic order.
  const std::vector<Word>& words() const noexcept { return words_; }
  double max_weight() const noexcept { return max_; }
  double min_weight() const noexcept { return min_; }
  bool all_negative() const noexcept { return max_ < 0.0; }

  LocallyConstantPotential scaled(double c) const;
  /// The same function viewed as a depth-`depth` potential (depth >= this->depth()).
  LocallyConstantPotential extended(const Subshift& sub, std::size_t depth) const;

 private:
  std::size_t depth_ = 1;
  std::size_t n_ = 0;
  std::vector<double> weights_;
  std::vector<Word> words_;
  double max_ = 0.0;
  double min_ = 0.0;
};

/// All admissible words of the given length in lexicographic order.
std::vector<Word> admissible_words(const Subshift& sub, std::size_t length);

/// S_n f(w·tail) with n = |w|; windows near the end read tail symbols.
/// Throws Inadmissible when w·tail is not admissible.
double birkhoff_sum(const LocallyConstantPotential& f, const Subshift& sub, std::span<const Symbol> w,
                    const TailPoint& tail);

/// S_n f(w̄) for the periodic point w̄ = www…; w must be a periodic word.
double periodic_birkhoff_sum(const LocallyConstantPotential& f, const Subshift& sub, std::span<const Symbol> w);

/// Hölder-type data of a locally constant potential.
struct HolderData {
  double v_alpha = 0.0;  ///< V_alpha(f)
  double k_f = 0.0;      ///< distortion constant V_alpha / (1 - e^{-alpha})
};

HolderData holder_data(const LocallyConstantPotential& f, double alpha);

struct AffineMap {
  std::string symbol;
  double slope = 0.5;
  double offset = 0.0;
};

/// Affine interval maps t ↦ slope·t + offset on [0, 1], one per symbol.
struct AffineIfsSpec {
  std::vector<AffineMap> maps;
};

struct AffineIfsSystem {
  ValidatedSubshift shift;
  LocallyConstantPotential potential;
  std::vector<std::string> warnings;
};

/// Full shift over the map symbols with f_e = log slope_e. Raises BadSlope,
/// ImageEscape, and OscViolation (the last downgraded to a warning when
/// allow_overlap is set).
AffineIfsSystem from_affine_ifs(const AffineIfsSpec& spec, bool allow_overlap = false, double alpha = 1.0);

/// Higher-block presentation: symbols are the admissible d-words of `sub`,
/// block a → b iff a_2…a_d = b_1…b_{d-1}; the new potential has depth 1.
struct BlockRecoding {
  ValidatedSubshift shift;
  LocallyConstantPotential potential;
  std::size_t depth = 1;
  /// blocks[i] is the original d-word named by block symbol i.
  std::vector<Word> blocks;

  /// Blocks of the point (w·tail) at positions 0..|w|-1.
  Word lift_word(std::span<const Symbol> w, const TailPoint& tail) const;
  TailPoint lift_tail(const TailPoint& tail) const;

 private:
  friend BlockRecoding block_recode(const Subshift&, const LocallyConstantPotential&);
  std::size_t original_size_ = 0;
  std::vector<std::size_t> block_of_index_;
  Symbol block_at(const TailPoint& point, std::size_t k) const;
};

BlockRecoding block_recode(const Subshift& sub, const LocallyConstantPotential& f);

}  // namespace thermoform
