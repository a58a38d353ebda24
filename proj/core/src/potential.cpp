#include "thermoform/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoform/error.hpp"

namespace thermoform {

namespace {

void extend_words(const Subshift& sub, Word& current, std::size_t length, std::vector<Word>& out) {
  if (current.size() == length) {
    out.push_back(current);
    return;
  }
  auto next = [&](Symbol s) {
    current.push_back(s);
    extend_words(sub, current, length, out);
    current.pop_back();
  };
  if (current.empty()) {
    for (Symbol s = 0; s < sub.size(); ++s) next(s);
  } else {
    for (Symbol s : sub.successors(current.back())) next(s);
  }
}

std::size_t checked_table_size(std::size_t n, std::size_t depth) {
  std::size_t size = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    if (size > (std::size_t{1} << 26) / std::max<std::size_t>(n, 1))
      throw Error(ErrorCode::BadPotential, "potential table too large for depth " + std::to_string(depth));
    size *= n;
  }
  return size;
}

// Evaluates S_n f on the symbol stream at(0), at(1), ...
template <class At>
double stream_sum(const LocallyConstantPotential& f, std::size_t n, At&& at) {
  const std::size_t d = f.depth();
  Word window(d);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) window[j] = at(k + j);
    sum += f.weight(window);
  }
  return sum;
}

}  // namespace

std::vector<Word> admissible_words(const Subshift& sub, std::size_t length) {
  std::vector<Word> out;
  if (length == 0) return out;
  Word current;
  extend_words(sub, current, length, out);
  return out;
}

LocallyConstantPotential LocallyConstantPotential::from_table(const Subshift& sub, std::size_t depth,
                                                             const std::map<Word, double>& table) {
  if (depth == 0) throw Error(ErrorCode::BadPotential, "depth must be positive");
  LocallyConstantPotential f;
  f.depth_ = depth;
  f.n_ = sub.size();
  f.weights_.assign(checked_table_size(f.n_, depth), std::numeric_limits<double>::quiet_NaN());
  f.words_ = admissible_words(sub, depth);
  for (const auto& [word, value] : table) {
    if (word.size() != depth)
      throw Error(ErrorCode::BadPotential, "weight key '" + sub.format(word) + "' has the wrong length");
    if (!is_admissible(word, sub))
      throw Error(ErrorCode::BadPotential, "weight key '" + sub.format(word) + "' is not admissible");
    if (!std::isfinite(value))
      throw Error(ErrorCode::BadPotential, "weight for '" + sub.format(word) + "' is not finite");
    f.weights_[f.index(word)] = value;
  }
  f.max_ = -std::numeric_limits<double>::infinity();
  f.min_ = std::numeric_limits<double>::infinity();
  for (const auto& w : f.words_) {
    const double v = f.weight(w);
    if (std::isnan(v)) throw Error(ErrorCode::BadPotential, "missing weight for '" + sub.format(w) + "'");
    f.max_ = std::max(f.max_, v);
    f.min_ = std::min(f.min_, v);
  }
  return f;
}

LocallyConstantPotential LocallyConstantPotential::per_symbol(const Subshift& sub, std::span<const double> weights) {
  if (weights.size() != sub.size()) throw Error(ErrorCode::BadPotential, "need one weight per symbol");
  std::map<Word, double> table;
  for (Symbol s = 0; s < sub.size(); ++s) table[Word{s}] = weights[s];
  return from_table(sub, 1, table);
}

LocallyConstantPotential LocallyConstantPotential::scaled(double c) const {
  LocallyConstantPotential g = *this;
  for (auto& w : g.weights_) w *= c;
  g.max_ = c >= 0 ? max_ * c : min_ * c;
  g.min_ = c >= 0 ? min_ * c : max_ * c;
  return g;
}

LocallyConstantPotential LocallyConstantPotential::extended(const Subshift& sub, std::size_t depth) const {
  if (depth < depth_) throw Error(ErrorCode::BadPotential, "cannot reduce depth by extension");
  if (depth == depth_) return *this;
  std::map<Word, double> table;
  for (const auto& w : admissible_words(sub, depth)) table[w] = weight(w);
  return from_table(sub, depth, table);
}

double birkhoff_sum(const LocallyConstantPotential& f, const Subshift& sub, std::span<const Symbol> w,
                    const TailPoint& tail) {
  if (w.empty()) return 0.0;
  validate_tail(tail, sub);
  if (!is_admissible(w, sub) || !sub.allowed(w.back(), tail.first()))
    throw Error(ErrorCode::Inadmissible, "w·tail is not admissible");
  const std::size_t n = w.size();
  return stream_sum(f, n, [&](std::size_t k) { return k < n ? w[k] : tail.at(k - n); });
}

double periodic_birkhoff_sum(const LocallyConstantPotential& f, const Subshift& sub, std::span<const Symbol> w) {
  if (w.empty()) return 0.0;
  if (!is_admissible(w, sub) || !sub.allowed(w.back(), w.front()))
    throw Error(ErrorCode::Inadmissible, "word is not periodic");
  const std::size_t n = w.size();
  return stream_sum(f, n, [&](std::size_t k) { return w[k % n]; });
}

HolderData holder_data(const LocallyConstantPotential& f, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::BadAlpha, "metric exponent must be positive");
  HolderData out;
  const auto& words = f.words();
  // words() is lexicographic, so words sharing an n-prefix are contiguous.
  for (std::size_t n = 1; n < f.depth(); ++n) {
    double osc = 0.0;
    std::size_t start = 0;
    while (start < words.size()) {
      std::size_t end = start;
      double lo = f.weight(words[start]), hi = lo;
      while (end < words.size() &&
             std::equal(words[start].begin(), words[start].begin() + static_cast<std::ptrdiff_t>(n),
                        words[end].begin())) {
        lo = std::min(lo, f.weight(words[end]));
        hi = std::max(hi, f.weight(words[end]));
        ++end;
      }
      osc = std::max(osc, hi - lo);
      start = end;
    }
    out.v_alpha = std::max(out.v_alpha, osc * std::exp(alpha * static_cast<double>(n - 1)));
  }
  out.k_f = out.v_alpha / (1.0 - std::exp(-alpha));
  return out;
}

AffineIfsSystem from_affine_ifs(const AffineIfsSpec& spec, bool allow_overlap, double alpha) {
  constexpr double kEdge = 1e-12;
  if (spec.maps.empty()) throw Error(ErrorCode::Config, "IFS has no maps");
  std::vector<std::string> warnings;
  for (const auto& m : spec.maps) {
    if (!(m.slope > 0.0 && m.slope < 1.0))
      throw Error(ErrorCode::BadSlope, "slope of map '" + m.symbol + "' must lie in (0, 1)");
    if (m.offset < -kEdge || m.offset + m.slope > 1.0 + kEdge)
      throw Error(ErrorCode::ImageEscape, "image of map '" + m.symbol + "' leaves [0, 1]");
  }
  for (std::size_t i = 0; i < spec.maps.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.maps.size(); ++j) {
      const auto& a = spec.maps[i];
      const auto& b = spec.maps[j];
      const double lo = std::max(a.offset, b.offset);
      const double hi = std::min(a.offset + a.slope, b.offset + b.slope);
      if (hi - lo > kEdge) {
        std::string msg = "images of maps '" + a.symbol + "' and '" + b.symbol + "' overlap on an interval of length " +
                          std::to_string(hi - lo);
        if (!allow_overlap) throw Error(ErrorCode::OscViolation, msg);
        warnings.push_back(msg);
      }
    }
  }
  SubshiftSpec shift_spec;
  shift_spec.alpha = alpha;
  for (const auto& m : spec.maps) shift_spec.symbols.push_back(m.symbol);
  shift_spec.incidence.assign(spec.maps.size(), std::vector<int>(spec.maps.size(), 1));
  auto shift = validate_subshift(shift_spec);
  std::vector<double> weights;
  for (const auto& m : spec.maps) weights.push_back(std::log(m.slope));
  auto potential = LocallyConstantPotential::per_symbol(shift.subshift, weights);
  return AffineIfsSystem{std::move(shift), std::move(potential), std::move(warnings)};
}

Symbol BlockRecoding::block_at(const TailPoint& point, std::size_t k) const {
  std::size_t index = 0;
  for (std::size_t j = 0; j < depth; ++j) index = index * original_size_ + point.at(k + j);
  return static_cast<Symbol>(block_of_index_.at(index));
}

Word BlockRecoding::lift_word(std::span<const Symbol> w, const TailPoint& tail) const {
  const TailPoint joined = tail.prepended(w);
  Word out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = block_at(joined, k);
  return out;
}

TailPoint BlockRecoding::lift_tail(const TailPoint& tail) const {
  TailPoint out;
  for (std::size_t k = 0; k < tail.prefix.size(); ++k) out.prefix.push_back(block_at(tail, k));
  for (std::size_t k = 0; k < tail.cycle.size(); ++k) out.cycle.push_back(block_at(tail, tail.prefix.size() + k));
  return out;
}

BlockRecoding block_recode(const Subshift& sub, const LocallyConstantPotential& f) {
  const std::size_t d = f.depth();
  const auto& blocks = f.words();
  const std::size_t m = blocks.size();

  SubshiftSpec spec;
  spec.alpha = sub.alpha();
  bool single = std::all_of(sub.names().begin(), sub.names().end(), [](const auto& s) { return s.size() == 1; });
  for (const auto& b : blocks) {
    if (d == 1 || single) {
      spec.symbols.push_back(sub.format(b));
    } else {
      std::string name;
      for (std::size_t i = 0; i < b.size(); ++i) name += (i ? "." : "") + sub.name(b[i]);
      spec.symbols.push_back(name);
    }
  }
  spec.incidence.assign(m, std::vector<int>(m, 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      bool ok;
      if (d == 1) {
        ok = sub.allowed(blocks[a][0], blocks[b][0]);
      } else {
        ok = std::equal(blocks[a].begin() + 1, blocks[a].end(), blocks[b].begin()) &&
             sub.allowed(blocks[a].back(), blocks[b].back());
      }
      spec.incidence[a][b] = ok ? 1 : 0;
    }
  }

  BlockRecoding out;
  out.shift = validate_subshift(spec);
  out.depth = d;
  out.blocks = blocks;
  out.original_size_ = sub.size();
  out.block_of_index_.assign(checked_table_size(sub.size(), d), static_cast<std::size_t>(-1));
  std::vector<double> weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.block_of_index_[f.index(blocks[i])] = i;
    weights[i] = f.weight(blocks[i]);
  }
  out.potential = LocallyConstantPotential::per_symbol(out.shift.subshift, weights);
  return out;
}

}  // namespace thermoform
