#include "thermoform/counting.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <thread>

#include "thermoform/enumerate.hpp"
#include "thermoform/error.hpp"
#include "thermoform/transfer.hpp"

namespace thermoform {

std::string to_string(CountKind kind) {
  switch (kind) {
    case CountKind::Plain: return "plain";
    case CountKind::InitialBlock: return "initial-block";
    case CountKind::FixedLength: return "fixed-length";
    case CountKind::Periodic: return "periodic";
    case CountKind::PeriodicInitialBlock: return "periodic-initial-block";
    case CountKind::PeriodicFixedLength: return "periodic-fixed-length";
  }
  return "unknown";
}

std::optional<CountKind> parse_count_kind(std::string_view text) {
  for (auto k : {CountKind::Plain, CountKind::InitialBlock, CountKind::FixedLength, CountKind::Periodic,
                 CountKind::PeriodicInitialBlock, CountKind::PeriodicFixedLength})
    if (text == to_string(k)) return k;
  // Single-letter aliases follow the item labels of the definitions.
  if (text == "a") return CountKind::Plain;
  if (text == "c") return CountKind::InitialBlock;
  if (text == "d") return CountKind::FixedLength;
  if (text == "e") return CountKind::Periodic;
  if (text == "f") return CountKind::PeriodicInitialBlock;
  if (text == "g") return CountKind::PeriodicFixedLength;
  return std::nullopt;
}

bool is_periodic(CountKind kind) {
  return kind == CountKind::Periodic || kind == CountKind::PeriodicInitialBlock ||
         kind == CountKind::PeriodicFixedLength;
}

namespace {

bool is_fixed_length(CountKind kind) {
  return kind == CountKind::FixedLength || kind == CountKind::PeriodicFixedLength;
}

bool is_initial_block(CountKind kind) {
  return kind == CountKind::InitialBlock || kind == CountKind::PeriodicInitialBlock;
}

// Longest word length whose Birkhoff sum can reach -T.
std::size_t length_bound(const LocallyConstantPotential& f, double threshold) {
  return static_cast<std::size_t>(std::floor((threshold + kThresholdSlack) / -f.max_weight()));
}

void check_query(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& q) {
  if (!f.all_negative()) throw Error(ErrorCode::NonNegativeWeight, "counting needs strictly negative weights");
  if (f.alphabet_size() != sub.size()) throw Error(ErrorCode::BadPotential, "potential and shift disagree on the alphabet");
  if (!is_periodic(q.kind)) {
    if (!q.tail) throw Error(ErrorCode::BadQuery, to_string(q.kind) + " count needs a tail point");
    validate_tail(*q.tail, sub);
  }
  if (is_fixed_length(q.kind) && q.length == 0) throw Error(ErrorCode::BadQuery, "fixed-length count needs length >= 1");
}

constexpr std::size_t kMaxDepth = 64;

// Pruned search shared by count, count_series and length_extremes. Each
// root/first-symbol pair is an independent task.
class Search {
 public:
  Search(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& q, double threshold)
      : sub_(sub), f_(f), q_(q), threshold_(threshold), k_f_(holder_data(f, sub.alpha()).k_f) {
    check_query(sub, f, q);
    const std::size_t d = f.depth();
    if (d > kMaxDepth) throw Error(ErrorCode::BadPotential, "potential depth above 64 is not supported");
    smallest_path_.resize(sub.size());
    for (Symbol s = 0; s < sub.size(); ++s) {
      Symbol cur = s;
      for (std::size_t j = 0; j + 1 < d; ++j) {
        cur = sub.successors(cur).front();
        smallest_path_[s].push_back(cur);
      }
    }
    if (is_initial_block(q.kind)) {
      if (q.target.is_all())
        for (Symbol s = 0; s < sub.size(); ++s) roots_.push_back(Word{s});
      else
        roots_ = q.target.words();
    } else {
      roots_.emplace_back();
    }
  }

  struct Task {
    std::size_t root = 0;
    std::optional<Symbol> first;
  };

  std::vector<Task> tasks() const {
    std::vector<Task> out;
    for (std::size_t r = 0; r < roots_.size(); ++r) {
      if (roots_[r].empty())
        for (Symbol s = 0; s < sub_.size(); ++s) out.push_back({r, s});
      else
        for (Symbol s : sub_.successors(roots_[r].back())) out.push_back({r, s});
    }
    return out;
  }

  /// Calls hit(word, sum) for every counted word (root included).
  template <class Hit>
  void run(const Task& task, Hit&& hit) const {
    const Word& root = roots_[task.root];
    const std::size_t n_max = length_bound(f_, threshold_);
    if (root.size() >= n_max) return;
    EnumerationRequest req;
    req.root = root;
    req.closure = is_periodic(q_.kind) ? Closure::Periodic : Closure::Tail;
    req.tail = q_.tail ? &*q_.tail : nullptr;
    req.max_length = is_fixed_length(q_.kind) ? std::min(q_.length, n_max) : n_max - root.size();
    req.first_symbol = task.first;
    if (is_fixed_length(q_.kind) && q_.length > n_max) return;

    const std::size_t d = f_.depth();
    // determined[L]: sum of the windows lying entirely inside a length-L prefix.
    std::vector<double> determined(root.size() + req.max_length + 1, 0.0);
    for (std::size_t L = d; L <= root.size(); ++L)
      determined[L] = determined[L - 1] + f_.weight(std::span<const Symbol>(root).subspan(L - d, d));
    const double cut = -threshold_ - kThresholdSlack;
    const bool filter_target = !is_initial_block(q_.kind) && !q_.target.is_all();

    auto keep = [&](std::span<const Symbol> w) {
      const std::size_t L = w.size();
      determined[L] = determined[L - 1] + (L >= d ? f_.weight(w.subspan(L - d, d)) : 0.0);
      if (filter_target && !q_.target.compatible_prefix(w)) return false;
      const auto& c = smallest_path_[w.back()];
      const double bound = determined[L] + overhang(w, [&](std::size_t i) { return c[i]; });
      return bound + k_f_ >= cut;
    };
    auto visit = [&](std::span<const Symbol> w) {
      const std::size_t L = w.size();
      if (is_fixed_length(q_.kind) && L != q_.length) return;
      double s = determined[L];
      if (is_periodic(q_.kind)) {
        s += overhang(w, [&](std::size_t i) { return w[i % L]; });
        if (filter_target && !q_.target.contains_stream([&](std::size_t k) { return w[k % L]; })) return;
      } else {
        s += overhang(w, [&](std::size_t i) { return q_.tail->at(i); });
        if (filter_target &&
            !q_.target.contains_stream([&](std::size_t k) { return k < L ? w[k] : q_.tail->at(k - L); }))
          return;
      }
      if (s >= cut) hit(w, s);
    };
    enumerate_admissible(sub_, req, keep, visit);
  }

  double k_f() const noexcept { return k_f_; }

 private:
  // Windows starting in the last d-1 positions of w; `after(i)` supplies
  // the i-th symbol past the end of w.
  template <class After>
  double overhang(std::span<const Symbol> w, After&& after) const {
    const std::size_t d = f_.depth();
    const std::size_t L = w.size();
    double s = 0.0;
    Symbol window[kMaxDepth];
    for (std::size_t k = L >= d ? L - d + 1 : 0; k < L; ++k) {
      for (std::size_t j = 0; j < d; ++j) window[j] = k + j < L ? w[k + j] : after(k + j - L);
      s += f_.weight(std::span<const Symbol>(window, d));
    }
    return s;
  }

  const Subshift& sub_;
  const LocallyConstantPotential& f_;
  const CountQuery& q_;
  double threshold_;
  double k_f_;
  std::vector<Word> smallest_path_;
  std::vector<Word> roots_;
};

// Runs every task, threads taking tasks round-robin; per-task results are
// merged in task order so the outcome does not depend on scheduling.
template <class Result, class PerTask>
std::vector<Result> run_tasks(const std::vector<Search::Task>& tasks, unsigned threads, PerTask&& per_task) {
  std::vector<Result> results(tasks.size());
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
  if (n <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = per_task(tasks[i]);
    return results;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < tasks.size(); i += n) results[i] = per_task(tasks[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace

std::uint64_t count(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& query,
                    const CountOptions& options) {
  if (!(query.threshold > 0.0)) throw Error(ErrorCode::BadQuery, "threshold must be positive");
  Search search(sub, f, query, query.threshold);
  auto per_task = run_tasks<std::uint64_t>(search.tasks(), options.threads, [&](const Search::Task& t) {
    std::uint64_t n = 0;
    search.run(t, [&](std::span<const Symbol>, double) { ++n; });
    return n;
  });
  std::uint64_t total = 0;
  for (auto n : per_task) total += n;
  return total;
}

namespace {

struct Oracle {
  const Subshift& sub;
  const LocallyConstantPotential& f;
  const CountQuery& q;
  std::uint64_t cap;
  std::uint64_t candidates = 0;
  std::uint64_t hits = 0;
  Word word;

  bool counted(const Word& root) const {
    Word full = root;
    full.insert(full.end(), word.begin(), word.end());
    if (is_fixed_length(q.kind) && word.size() != q.length) return false;
    double s = 0.0;
    if (is_periodic(q.kind)) {
      if (!sub.allowed(full.back(), full.front())) return false;
      s = periodic_birkhoff_sum(f, sub, full);
      if (!is_initial_block(q.kind) && !cylinder_membership(TailPoint::periodic(full), q.target)) return false;
    } else {
      if (!sub.allowed(full.back(), q.tail->first())) return false;
      s = birkhoff_sum(f, sub, full, *q.tail);
      if (!is_initial_block(q.kind) && !cylinder_membership(q.tail->prepended(full), q.target)) return false;
    }
    return s >= -q.threshold - kThresholdSlack;
  }

  void grow(const Word& root, std::size_t max_length) {
    for (Symbol s = 0; s < sub.size(); ++s) {
      const Symbol prev = word.empty() ? (root.empty() ? s : root.back()) : word.back();
      if (!(word.empty() && root.empty()) && !sub.allowed(prev, s)) continue;
      if (++candidates > cap) throw Error(ErrorCode::CapExceeded, "oracle candidate cap exceeded");
      word.push_back(s);
      if (counted(root)) ++hits;
      if (word.size() < max_length) grow(root, max_length);
      word.pop_back();
    }
  }
};

}  // namespace

std::uint64_t count_oracle(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& query,
                           std::uint64_t cap) {
  check_query(sub, f, query);
  if (!(query.threshold > 0.0)) throw Error(ErrorCode::BadQuery, "threshold must be positive");
  const std::size_t n_max = length_bound(f, query.threshold);
  std::vector<Word> roots;
  if (is_initial_block(query.kind)) {
    if (query.target.is_all())
      for (Symbol s = 0; s < sub.size(); ++s) roots.push_back(Word{s});
    else
      roots = query.target.words();
  } else {
    roots.emplace_back();
  }
  Oracle oracle{sub, f, query, cap, 0, 0, {}};
  for (const auto& root : roots)
    if (root.size() < n_max) oracle.grow(root, n_max - root.size());
  return oracle.hits;
}

ExtremalSums extremal_sums(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& tail,
                           std::size_t n_max) {
  validate_tail(tail, sub);
  TransferGraph graph(sub, f);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo(graph.size(), inf), hi(graph.size(), -inf);
  const std::size_t start = graph.state_of(tail);
  lo[start] = hi[start] = 0.0;
  ExtremalSums out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<double> nlo(graph.size(), inf), nhi(graph.size(), -inf);
    for (const auto& e : graph.edges()) {
      if (lo[e.col] == inf) continue;
      nlo[e.row] = std::min(nlo[e.row], lo[e.col] + e.weight);
      nhi[e.row] = std::max(nhi[e.row], hi[e.col] + e.weight);
    }
    lo = std::move(nlo);
    hi = std::move(nhi);
    out.minimum.push_back(*std::min_element(lo.begin(), lo.end()));
    out.maximum.push_back(*std::max_element(hi.begin(), hi.end()));
  }
  return out;
}

LengthExtremes length_extremes(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& tail,
                               double threshold) {
  if (!f.all_negative()) throw Error(ErrorCode::NonNegativeWeight, "length statistics need strictly negative weights");
  if (!(threshold > 0.0)) throw Error(ErrorCode::BadQuery, "threshold must be positive");
  // Both b_n and d_n strictly decrease in n, so each cutoff is the last n
  // at which the bound still reaches -T.
  const auto sums = extremal_sums(sub, f, tail, length_bound(f, threshold) + 1);
  const double cut = -threshold - kThresholdSlack;
  LengthExtremes out;
  while (out.shortest_cutoff < sums.minimum.size() && sums.minimum[out.shortest_cutoff] >= cut) ++out.shortest_cutoff;
  while (out.longest < sums.maximum.size() && sums.maximum[out.longest] >= cut) ++out.longest;
  return out;
}

CountSeries count_series(const Subshift& sub, const LocallyConstantPotential& f, const CountQuery& query, double t_lo,
                         double t_hi, double delta, const CountOptions& options) {
  if (!(t_hi > 0.0) || t_lo > t_hi) throw Error(ErrorCode::BadQuery, "series window must satisfy 0 < t_hi, t_lo <= t_hi");
  Search search(sub, f, query, t_hi);
  auto per_task = run_tasks<std::vector<double>>(search.tasks(), options.threads, [&](const Search::Task& t) {
    std::vector<double> jumps;
    search.run(t, [&](std::span<const Symbol>, double s) { jumps.push_back(-s); });
    return jumps;
  });
  std::vector<double> jumps;
  for (auto& v : per_task) jumps.insert(jumps.end(), v.begin(), v.end());
  std::sort(jumps.begin(), jumps.end());

  CountSeries series;
  series.delta = delta;
  std::uint64_t before = 0;
  for (std::size_t i = 0; i < jumps.size();) {
    std::size_t j = i + 1;
    while (j < jumps.size() && jumps[j] - jumps[j - 1] <= kThresholdSlack) ++j;
    const double t = jumps[i];
    const std::uint64_t after = before + (j - i);
    if (t >= t_lo - kThresholdSlack) {
      const double norm = std::exp(delta * t);
      series.rows.push_back({t, before, after, static_cast<double>(before) / norm, static_cast<double>(after) / norm});
    }
    before = after;
    i = j;
  }
  return series;
}

TailPoint smallest_continuation(const Subshift& sub, std::span<const Symbol> w) {
  if (w.empty()) throw Error(ErrorCode::BadQuery, "continuation of the empty word");
  if (!is_admissible(w, sub)) throw Error(ErrorCode::Inadmissible, "word is not admissible");
  // Greedy smallest successors eventually revisit a symbol.
  std::vector<std::size_t> seen(sub.size(), std::numeric_limits<std::size_t>::max());
  Word path;
  Symbol cur = w.back();
  while (true) {
    cur = sub.successors(cur).front();
    if (seen[cur] != std::numeric_limits<std::size_t>::max()) break;
    seen[cur] = path.size();
    path.push_back(cur);
  }
  TailPoint out;
  out.prefix.assign(w.begin(), w.end());
  out.prefix.insert(out.prefix.end(), path.begin(), path.begin() + static_cast<std::ptrdiff_t>(seen[cur]));
  out.cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(seen[cur]), path.end());
  return out;
}

bool ComparisonReport::all_hold() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.slack() >= 0.0; });
}

namespace {

Word concat(std::span<const Symbol> a, std::span<const Symbol> b) {
  Word out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Shortest word u (possibly empty) with a·u·b admissible.
Word connecting_word(const Subshift& sub, Symbol a, Symbol b) {
  if (sub.allowed(a, b)) return {};
  const auto start = static_cast<Symbol>(sub.size());
  constexpr Symbol none = std::numeric_limits<Symbol>::max();
  std::vector<Symbol> parent(sub.size(), none);
  std::deque<Symbol> queue;
  for (Symbol s : sub.successors(a)) {
    parent[s] = start;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Symbol v = queue.front();
    queue.pop_front();
    if (sub.allowed(v, b)) {
      Word path;
      for (Symbol x = v; x != start; x = parent[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (Symbol s : sub.successors(v))
      if (parent[s] == none) {
        parent[s] = v;
        queue.push_back(s);
      }
  }
  throw Error(ErrorCode::NotIrreducible, "no connecting word");
}

}  // namespace

ComparisonReport verify_comparison_lemmas(const Subshift& sub, const LocallyConstantPotential& f,
                                          std::span<const Symbol> tau, std::size_t q, double threshold) {
  if (tau.empty() || q == 0) throw Error(ErrorCode::BadQuery, "comparison needs a nonempty word and q >= 1");
  if (!(threshold > 0.0)) throw Error(ErrorCode::BadQuery, "threshold must be positive");
  ComparisonReport report;
  const double alpha = sub.alpha();
  const std::size_t k = tau.size();
  report.k = holder_data(f, alpha).k_f;
  report.decay = report.k * std::exp(-static_cast<double>(k + q) * alpha);
  const double K = report.k;
  const double decay = report.decay;

  auto n = [&](CountKind kind, std::optional<TailPoint> tail, TargetSet target, double t, std::size_t len = 0) {
    if (!(t > 0.0)) return 0.0;
    CountQuery query{kind, std::move(tail), std::move(target), len, t};
    return static_cast<double>(count(sub, f, query));
  };
  auto cyl = [&](const Word& w) { return TargetSet::of({w}, sub); };

  const Word tau_w(tau.begin(), tau.end());
  const TailPoint tau_plus = smallest_continuation(sub, tau);
  std::vector<Word> gammas;
  for (auto& g : admissible_words(sub, q))
    if (sub.allowed(tau.back(), g.front())) gammas.push_back(std::move(g));

  // (i)
  report.checks.push_back({"per-fixed-length",
                           n(CountKind::PeriodicFixedLength, std::nullopt, cyl(tau_w), threshold, q),
                           n(CountKind::FixedLength, tau_plus, cyl(tau_w), threshold + K, q)});

  // (ii) and (iii)
  double lower = 0.0, upper = 0.0;
  for (const auto& g : gammas) {
    const Word tg = concat(tau, g);
    const TailPoint rho = smallest_continuation(sub, tg);
    lower += n(CountKind::InitialBlock, rho, cyl(tg), threshold - decay);
    upper += n(CountKind::Plain, rho, cyl(tg), threshold + decay);
  }
  report.checks.push_back({"per-initial-block-lower", lower,
                           n(CountKind::PeriodicInitialBlock, std::nullopt, cyl(tau_w), threshold)});
  const double per_tau = n(CountKind::Periodic, std::nullopt, cyl(tau_w), threshold);
  report.checks.push_back({"per-cylinder-upper", per_tau, upper});

  // (v) with F the first half of the admissible γ.
  const std::size_t half = (gammas.size() + 1) / 2;
  double split = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const Word tg = concat(tau, gammas[i]);
    if (i < half)
      split += n(CountKind::Plain, smallest_continuation(sub, tg), cyl(tg), threshold + decay);
    else
      split += n(CountKind::Plain, tau_plus, cyl(tg), threshold + 2.0 * K);
  }
  for (std::size_t i = 1; i < k + q; ++i) split += n(CountKind::FixedLength, tau_plus, cyl(tau_w), threshold + K, i);
  report.checks.push_back({"per-cylinder-split", per_tau, split});

  // Whole space, with ρ = ττ⁺ and Ω the shortest connecting words into ρ.
  const TailPoint& rho = tau_plus;
  std::vector<Word> omega;
  for (Symbol a = 0; a < sub.size(); ++a) {
    Word u = connecting_word(sub, a, rho.first());
    if (std::find(omega.begin(), omega.end(), u) == omega.end()) omega.push_back(std::move(u));
  }
  const auto blocks = admissible_words(sub, q);
  const std::size_t f_size = (blocks.size() + 1) / 2;
  double whole = 0.0;
  for (std::size_t i = 0; i < f_size; ++i)
    whole += n(CountKind::Plain, smallest_continuation(sub, blocks[i]), cyl(blocks[i]),
               threshold + K * std::exp(-static_cast<double>(q) * alpha));
  std::vector<Word> rest(blocks.begin() + static_cast<std::ptrdiff_t>(f_size), blocks.end());
  for (const auto& u : omega) {
    const TailPoint point = rho.prepended(u);
    if (!rest.empty()) whole += n(CountKind::Plain, point, TargetSet::of(rest, sub), threshold + K);
    for (std::size_t i = 1; i < q; ++i) whole += n(CountKind::FixedLength, point, TargetSet::all(), threshold + K, i);
  }
  report.checks.push_back(
      {"per-whole-space", n(CountKind::Periodic, std::nullopt, TargetSet::all(), threshold), whole});
  return report;
}

LengthProbe probe_length(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& tail,
                         double threshold) {
  LengthProbe probe;
  probe.threshold = threshold;
  probe.extremes = length_extremes(sub, f, tail, threshold);
  CountQuery q;
  q.kind = CountKind::Plain;
  q.tail = tail;
  q.threshold = threshold;
  Search search(sub, f, q, threshold);
  std::vector<std::uint64_t> by_length(probe.extremes.longest + 1, 0);
  for (const auto& t : search.tasks())
    search.run(t, [&](std::span<const Symbol> w, double) {
      if (w.size() >= by_length.size()) by_length.resize(w.size() + 1, 0);
      ++by_length[w.size()];
    });
  probe.deepest_counted = by_length.size() - 1;
  while (probe.deepest_counted > 0 && by_length[probe.deepest_counted] == 0) --probe.deepest_counted;
  for (auto c : by_length) probe.total += c;
  for (std::size_t i = std::max<std::size_t>(probe.extremes.shortest_cutoff, 1); i <= probe.extremes.longest; ++i) {
    const double c = static_cast<double>(by_length[i]);
    probe.rows.push_back({i, by_length[i], c > 0.0 ? static_cast<double>(probe.total) / c
                                                   : std::numeric_limits<double>::infinity()});
  }
  return probe;
}

}  // namespace thermoform
