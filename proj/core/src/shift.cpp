#include "thermoform/shift.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "thermoform/error.hpp"

namespace thermoform {

struct SubshiftBuilder {
  static Subshift build(const SubshiftSpec& spec) {
    Subshift sub;
    const std::size_t n = spec.symbols.size();
    sub.names_ = spec.symbols;
    sub.alpha_ = spec.alpha;
    sub.incidence_.assign(n * n, 0);
    sub.successors_.assign(n, {});
    sub.predecessors_.assign(n, {});
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (spec.incidence[a][b] != 0) {
          sub.incidence_[a * n + b] = 1;
          sub.successors_[a].push_back(static_cast<Symbol>(b));
          sub.predecessors_[b].push_back(static_cast<Symbol>(a));
        }
      }
    }
    sub.single_char_ = std::all_of(spec.symbols.begin(), spec.symbols.end(),
                                   [](const std::string& s) { return s.size() == 1; });
    return sub;
  }
};

std::optional<Symbol> Subshift::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<Symbol>(it - names_.begin());
}

Word Subshift::parse_word(std::string_view text) const {
  Word out;
  auto push = [&](std::string_view token) {
    auto s = find(token);
    if (!s) throw Error(ErrorCode::UnknownSymbol, "symbol '" + std::string(token) + "' is not in the alphabet");
    out.push_back(*s);
  };
  const bool spaced = text.find_first_of(" \t") != std::string_view::npos;
  if (single_char_ && !spaced) {
    for (std::size_t i = 0; i < text.size(); ++i) push(text.substr(i, 1));
  } else {
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) push(token);
  }
  return out;
}

std::string Subshift::format(std::span<const Symbol> word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!single_char_ && i > 0) out += ' ';
    out += names_.at(word[i]);
  }
  return out;
}

std::size_t Subshift::edge_count() const noexcept {
  return static_cast<std::size_t>(std::count(incidence_.begin(), incidence_.end(), std::uint8_t{1}));
}

std::vector<std::vector<int>> Subshift::incidence_rows() const {
  std::vector<std::vector<int>> rows(size(), std::vector<int>(size(), 0));
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) rows[a][b] = incidence_[a * size() + b];
  return rows;
}

std::size_t ConnectionWitnesses::max_length() const noexcept {
  std::size_t m = 0;
  for (const auto& w : words_) m = std::max(m, w.size());
  return m;
}

namespace {

// BFS from `from` over successors; returns, for every target, the symbols
// strictly between `from` and the target on a shortest path.
std::vector<std::optional<Word>> shortest_connections(const Subshift& sub, Symbol from) {
  const std::size_t n = sub.size();
  std::vector<int> parent(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<Symbol> queue;
  // Paths of length one: direct successors.
  for (Symbol b : sub.successors(from)) {
    if (!seen[b]) {
      seen[b] = true;
      parent[b] = -2;
      queue.push_back(b);
    }
  }
  while (!queue.empty()) {
    Symbol a = queue.front();
    queue.pop_front();
    for (Symbol b : sub.successors(a)) {
      if (!seen[b]) {
        seen[b] = true;
        parent[b] = static_cast<int>(a);
        queue.push_back(b);
      }
    }
  }
  std::vector<std::optional<Word>> out(n);
  for (std::size_t b = 0; b < n; ++b) {
    if (!seen[b]) continue;
    Word middle;
    for (int p = parent[b]; p >= 0; p = parent[static_cast<std::size_t>(p)]) middle.push_back(static_cast<Symbol>(p));
    std::reverse(middle.begin(), middle.end());
    out[b] = std::move(middle);
  }
  return out;
}

}  // namespace

ValidatedSubshift validate_subshift(const SubshiftSpec& spec) {
  const std::size_t n = spec.symbols.size();
  if (n == 0) throw Error(ErrorCode::Config, "alphabet is empty");
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha))
    throw Error(ErrorCode::BadAlpha, "metric exponent must be positive");
  std::set<std::string> unique(spec.symbols.begin(), spec.symbols.end());
  if (unique.size() != n) throw Error(ErrorCode::Config, "duplicate symbol names");
  for (const auto& s : spec.symbols)
    if (s.empty() || s.find_first_of(" \t\n") != std::string::npos)
      throw Error(ErrorCode::Config, "symbol names must be nonempty and contain no whitespace");
  if (spec.incidence.size() != n) throw Error(ErrorCode::Config, "incidence must have one row per symbol");
  for (std::size_t a = 0; a < n; ++a) {
    if (spec.incidence[a].size() != n)
      throw Error(ErrorCode::Config, "incidence row " + std::to_string(a) + " has wrong length");
    for (int v : spec.incidence[a])
      if (v != 0 && v != 1) throw Error(ErrorCode::Config, "incidence entries must be 0 or 1");
  }
  for (std::size_t a = 0; a < n; ++a) {
    bool row = false, col = false;
    for (std::size_t b = 0; b < n; ++b) {
      row = row || spec.incidence[a][b] != 0;
      col = col || spec.incidence[b][a] != 0;
    }
    if (!row) throw Error(ErrorCode::DeadSymbol, "symbol '" + spec.symbols[a] + "' has no successor");
    if (!col) throw Error(ErrorCode::DeadSymbol, "symbol '" + spec.symbols[a] + "' has no predecessor");
  }

  Subshift sub = SubshiftBuilder::build(spec);
  std::vector<Word> words(n * n);
  for (Symbol a = 0; a < n; ++a) {
    auto paths = shortest_connections(sub, a);
    for (Symbol b = 0; b < n; ++b) {
      if (!paths[b])
        throw Error(ErrorCode::NotIrreducible,
                    "no admissible path from '" + spec.symbols[a] + "' to '" + spec.symbols[b] + "'");
      words[a * n + b] = std::move(*paths[b]);
    }
  }
  return ValidatedSubshift{std::move(sub), ConnectionWitnesses(n, std::move(words))};
}

bool is_admissible(std::span<const Symbol> word, const Subshift& sub) {
  for (Symbol s : word)
    if (s >= sub.size()) throw Error(ErrorCode::UnknownSymbol, "symbol index " + std::to_string(s));
  for (std::size_t i = 1; i < word.size(); ++i)
    if (!sub.allowed(word[i - 1], word[i])) return false;
  return true;
}

Word TailPoint::head(std::size_t n) const {
  Word out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = at(k);
  return out;
}

TailPoint TailPoint::shifted(std::size_t k) const {
  if (k <= prefix.size()) return TailPoint{Word(prefix.begin() + static_cast<std::ptrdiff_t>(k), prefix.end()), cycle};
  const std::size_t r = (k - prefix.size()) % cycle.size();
  Word rotated(cycle.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) rotated[i] = cycle[(r + i) % cycle.size()];
  return TailPoint{{}, std::move(rotated)};
}

TailPoint TailPoint::prepended(std::span<const Symbol> w) const {
  TailPoint out;
  out.prefix.assign(w.begin(), w.end());
  out.prefix.insert(out.prefix.end(), prefix.begin(), prefix.end());
  out.cycle = cycle;
  return out;
}

void validate_tail(const TailPoint& tail, const Subshift& sub) {
  if (tail.cycle.empty()) throw Error(ErrorCode::Inadmissible, "tail cycle is empty");
  Word joined = tail.prefix;
  joined.insert(joined.end(), tail.cycle.begin(), tail.cycle.end());
  if (!is_admissible(joined, sub)) throw Error(ErrorCode::Inadmissible, "tail prefix·cycle is not admissible");
  if (!sub.allowed(tail.cycle.back(), tail.cycle.front()))
    throw Error(ErrorCode::Inadmissible, "tail cycle does not close");
}

std::optional<std::size_t> common_prefix_length(const TailPoint& a, const TailPoint& b) {
  // Beyond max prefix + lcm of the cycle lengths both streams repeat jointly.
  const std::size_t horizon = std::max(a.prefix.size(), b.prefix.size()) + std::lcm(a.cycle.size(), b.cycle.size());
  for (std::size_t k = 0; k < horizon; ++k)
    if (a.at(k) != b.at(k)) return k;
  return std::nullopt;
}

double distance(const TailPoint& a, const TailPoint& b, double alpha) {
  auto n = common_prefix_length(a, b);
  if (!n) return 0.0;
  return std::exp(-alpha * static_cast<double>(*n));
}

TargetSet TargetSet::of(std::vector<Word> words, const Subshift& sub) {
  for (const auto& w : words) {
    if (w.empty()) throw Error(ErrorCode::BadQuery, "target words must be nonempty");
    if (!is_admissible(w, sub)) throw Error(ErrorCode::BadQuery, "target word '" + sub.format(w) + "' is not admissible");
  }
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j)
      if (i != j && cylinder_relation(words[i], words[j]) != CylinderRelation::Disjoint)
        throw Error(ErrorCode::BadQuery,
                    "target cylinders [" + sub.format(words[i]) + "] and [" + sub.format(words[j]) + "] overlap");
  TargetSet set;
  set.all_ = false;
  set.words_ = std::move(words);
  return set;
}

std::size_t TargetSet::max_word_length() const noexcept {
  std::size_t m = 0;
  for (const auto& w : words_) m = std::max(m, w.size());
  return m;
}

bool TargetSet::compatible_prefix(std::span<const Symbol> prefix) const noexcept {
  if (all_) return true;
  for (const auto& w : words_) {
    const std::size_t n = std::min(w.size(), prefix.size());
    if (std::equal(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n), prefix.begin())) return true;
  }
  return false;
}

bool cylinder_membership(const TailPoint& point, const TargetSet& set) {
  return set.contains_stream([&](std::size_t k) { return point.at(k); });
}

CylinderRelation cylinder_relation(std::span<const Symbol> a, std::span<const Symbol> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin())) return CylinderRelation::Disjoint;
  if (a.size() == b.size()) return CylinderRelation::Equal;
  return a.size() < b.size() ? CylinderRelation::FirstContainsSecond : CylinderRelation::SecondContainsFirst;
}

}  // namespace thermoform
