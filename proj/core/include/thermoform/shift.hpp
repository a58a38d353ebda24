#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thermoform {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

/// Raw, unvalidated description of a subshift of finite type.
struct SubshiftSpec {
  std::vector<std::string> symbols;
  std::vector<std::vector<int>> incidence;
  double alpha = 1.0;
};

/// A one-sided subshift of finite type over a finite alphabet with a
/// strongly connected incidence digraph. Symbols are the indices
/// 0..size()-1; names are kept for parsing and printing.
///
/// Instances only come out of validate_subshift, so every Subshift in the
/// program satisfies: no dead rows or columns, strong connectivity, alpha > 0.
class Subshift {
 public:
  std::size_t size() const noexcept { return names_.size(); }
  double alpha() const noexcept { return alpha_; }

  bool allowed(Symbol from, Symbol to) const noexcept {
    return incidence_[static_cast<std::size_t>(from) * size() + to] != 0;
  }
  std::span<const Symbol> successors(Symbol s) const noexcept { return successors_[s]; }
  std::span<const Symbol> predecessors(Symbol s) const noexcept { return predecessors_[s]; }

  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<Symbol> find(std::string_view name) const;

  /// Parses a word. Single-character alphabets read one symbol per
  /// character; otherwise symbols are separated by whitespace.
  Word parse_word(std::string_view text) const;
  std::string format(std::span<const Symbol> word) const;

  /// Number of ones in the incidence matrix.
  std::size_t edge_count() const noexcept;
  std::vector<std::vector<int>> incidence_rows() const;

 private:
  friend struct SubshiftBuilder;

  std::vector<std::string> names_;
  std::vector<std::uint8_t> incidence_;
  std::vector<std::vector<Symbol>> successors_;
  std::vector<std::vector<Symbol>> predecessors_;
  double alpha_ = 1.0;
  bool single_char_ = true;
};

/// Shortest connecting words: witness(a, b) is a shortest word w (possibly
/// empty) such that a w b is admissible.
class ConnectionWitnesses {
 public:
  ConnectionWitnesses() = default;
  ConnectionWitnesses(std::size_t n, std::vector<Word> words) : n_(n), words_(std::move(words)) {}

  const Word& witness(Symbol from, Symbol to) const { return words_.at(from * n_ + to); }
  std::size_t max_length() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<Word> words_;
};

struct ValidatedSubshift {
  Subshift subshift;
  ConnectionWitnesses witnesses;
};

/// Checks the matrix shape, dead symbols, alpha, and strong connectivity.
/// Throws Error with DeadSymbol, BadAlpha, NotIrreducible or Config.
ValidatedSubshift validate_subshift(const SubshiftSpec& spec);

/// True iff every adjacent pair is allowed. Throws UnknownSymbol for
/// indices outside the alphabet.
bool is_admissible(std::span<const Symbol> word, const Subshift& sub);

/// The eventually periodic point prefix·cycle·cycle·…
struct TailPoint {
  Word prefix;
  Word cycle;

  static TailPoint periodic(Word cycle) { return TailPoint{{}, std::move(cycle)}; }

  Symbol at(std::size_t k) const noexcept {
    return k < prefix.size() ? prefix[k] : cycle[(k - prefix.size()) % cycle.size()];
  }
  Symbol first() const noexcept { return at(0); }
  /// Copies the first n symbols of the point.
  Word head(std::size_t n) const;
  /// The point σ^k(this), normalized to an eventually periodic representation.
  TailPoint shifted(std::size_t k) const;
  /// The point w·this.
  TailPoint prepended(std::span<const Symbol> w) const;

  friend bool operator==(const TailPoint&, const TailPoint&) = default;
};

/// Throws Inadmissible unless cycle is nonempty, prefix·cycle is admissible
/// and the cycle closes (last to first allowed).
void validate_tail(const TailPoint& tail, const Subshift& sub);

/// Length of the longest common prefix; nullopt when the points coincide.
std::optional<std::size_t> common_prefix_length(const TailPoint& a, const TailPoint& b);

/// d_alpha(a, b) = exp(-alpha * |a ∧ b|), zero for equal points.
double distance(const TailPoint& a, const TailPoint& b, double alpha);

/// A finite disjoint union of cylinders, or the whole space.
class TargetSet {
 public:
  static TargetSet all() { return TargetSet{}; }
  /// Throws BadQuery when a word is empty, inadmissible or a prefix of another.
  static TargetSet of(std::vector<Word> words, const Subshift& sub);

  bool is_all() const noexcept { return all_; }
  const std::vector<Word>& words() const noexcept { return words_; }
  std::size_t max_word_length() const noexcept;

  /// Membership of the symbol stream produced by at(k).
  template <class At>
  bool contains_stream(At&& at) const {
    if (all_) return true;
    for (const auto& w : words_) {
      bool match = true;
      for (std::size_t k = 0; k < w.size() && match; ++k) match = (at(k) == w[k]);
      if (match) return true;
    }
    return false;
  }

  /// False when no listed word can still match a stream starting with prefix.
  bool compatible_prefix(std::span<const Symbol> prefix) const noexcept;

 private:
  bool all_ = true;
  std::vector<Word> words_;
};

bool cylinder_membership(const TailPoint& point, const TargetSet& set);

/// Cylinder relation of two words: [a] and [b] are disjoint unless one word
/// is a prefix of the other, in which case the longer word's cylinder is
/// contained in the shorter one's.
enum class CylinderRelation { Disjoint, FirstContainsSecond, SecondContainsFirst, Equal };
CylinderRelation cylinder_relation(std::span<const Symbol> a, std::span<const Symbol> b);

}  // namespace thermoform
