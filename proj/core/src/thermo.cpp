#include "thermoform/thermo.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "thermoform/enumerate.hpp"
#include "thermoform/error.hpp"

namespace thermoform {

namespace {

struct PowerResult {
  double lambda = 0.0;
  std::vector<double> vector;
  std::size_t iterations = 0;
};

// Power iteration on C (or Cᵀ) plus shift·I. Returns nullopt-like empty
// vector when the Collatz–Wielandt bracket fails to close in `budget` steps.
PowerResult power_iterate(const TransferGraph& graph, const std::vector<double>& coeff, bool transpose, double shift,
                          double tolerance, std::size_t budget) {
  const std::size_t n = graph.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  for (std::size_t it = 1; it <= budget; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    const auto& edges = graph.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      if (transpose)
        y[e.col] += coeff[k] * v[e.row];
      else
        y[e.row] += coeff[k] * v[e.col];
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += shift * v[i];
      const double r = y[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      total += y[i];
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw Error(ErrorCode::NoConvergence, "power iteration lost positivity");
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / total;
    if (hi - lo <= tolerance * hi) return PowerResult{0.5 * (hi + lo) - shift, v, it};
  }
  return PowerResult{0.0, {}, budget};
}

PowerResult leading_vector(const TransferGraph& graph, const std::vector<double>& coeff, bool transpose,
                           const PerronOptions& options) {
  const std::size_t plain = std::min(options.plain_iterations, options.max_iterations);
  auto r = power_iterate(graph, coeff, transpose, 0.0, options.tolerance, plain);
  if (!r.vector.empty()) return r;
  // Imprimitive or slowly mixing: the shift keeps the Perron vector and
  // makes the spectrum strictly dominated.
  auto s = power_iterate(graph, coeff, transpose, 1.0, options.tolerance, options.max_iterations - plain);
  if (s.vector.empty())
    throw Error(ErrorCode::NoConvergence, "Perron eigenvector did not converge in " +
                                              std::to_string(options.max_iterations) + " iterations");
  s.iterations += plain;
  return s;
}

// Admissible words of length `length` that may follow symbol `after`.
std::vector<Word> continuations(const Subshift& sub, Symbol after, std::size_t length) {
  std::vector<Word> out;
  if (length == 0) {
    out.emplace_back();
    return out;
  }
  for (auto& w : admissible_words(sub, length))
    if (sub.allowed(after, w.front())) out.push_back(std::move(w));
  return out;
}

// S_n f(ω·c) where c supplies the symbols past the end of ω.
double sum_with_continuation(const LocallyConstantPotential& f, std::span<const Symbol> w, std::span<const Symbol> c) {
  const std::size_t d = f.depth();
  const std::size_t n = w.size();
  Word window(d);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) window[j] = k + j < n ? w[k + j] : c[k + j - n];
    s += f.weight(window);
  }
  return s;
}

}  // namespace

PerronData perron_data(const TransferGraph& graph, double x, const PerronOptions& options) {
  std::vector<double> coeff;
  coeff.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) coeff.push_back(std::exp(x * e.weight));

  auto right = leading_vector(graph, coeff, false, options);
  auto left = leading_vector(graph, coeff, true, options);
  const double dot = std::inner_product(left.vector.begin(), left.vector.end(), right.vector.begin(), 0.0);
  for (auto& u : left.vector) u /= dot;

  PerronData out;
  out.lambda = right.lambda;
  out.right = std::move(right.vector);
  out.left = std::move(left.vector);
  out.iterations = right.iterations + left.iterations;
  return out;
}

PerronData perron_data(const Subshift& sub, const LocallyConstantPotential& f, double x, const PerronOptions& options) {
  return perron_data(TransferGraph(sub, f), x, options);
}

double pressure(const Subshift& sub, const LocallyConstantPotential& f, double x) {
  return std::log(perron_data(sub, f, x).lambda);
}

std::vector<double> fekete_sequence(const Subshift& sub, const LocallyConstantPotential& f, double x,
                                    std::size_t n_max) {
  const std::size_t d = f.depth();
  std::vector<std::vector<Word>> tails(sub.size());
  for (Symbol s = 0; s < sub.size(); ++s) tails[s] = continuations(sub, s, d - 1);

  std::vector<long double> z(n_max + 1, 0.0L);
  EnumerationRequest req;
  req.closure = Closure::Free;
  req.max_length = n_max;
  enumerate_admissible(
      sub, req, [](std::span<const Symbol>) { return true; },
      [&](std::span<const Symbol> w) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& c : tails[w.back()]) best = std::max(best, sum_with_continuation(f, w, c));
        z[w.size()] += std::exp(static_cast<long double>(x * best));
      });
  std::vector<double> out;
  for (std::size_t n = 1; n <= n_max; ++n)
    out.push_back(static_cast<double>(std::log(z[n]) / static_cast<long double>(n)));
  return out;
}

DeltaResult find_delta(const Subshift& sub, const LocallyConstantPotential& f) {
  if (!f.all_negative())
    throw Error(ErrorCode::NonNegativeWeight, "the Bowen root needs strictly negative weights");
  PressureFunction p(sub, f);
  DeltaResult out;
  out.pressure_at_zero = p(0.0);
  if (!(out.pressure_at_zero > 0.0))
    throw Error(ErrorCode::NotRegular, "P(0) = log r(A) must be positive");

  double lo = 0.0;
  double hi = 1.0;
  while (p(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorCode::NotRegular, "pressure has no root below 1e12");
  }
  // P is strictly decreasing: keep P(lo) > 0 >= P(hi).
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double width_floor = std::max(1e-14, 4.0 * std::numeric_limits<double>::epsilon() * hi);
    if (hi - lo <= width_floor || mid <= lo || mid >= hi) break;
    ++out.bisections;
    if (p(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.delta = 0.5 * (lo + hi);
  out.pressure_at_delta = p(out.delta);
  return out;
}

GibbsState gibbs_profile(const Subshift& sub, const LocallyConstantPotential& f, double x,
                         const GibbsOptions& options) {
  TransferGraph graph(sub, f);
  const auto perron = perron_data(graph, x);
  GibbsState state{x, perron.lambda, std::log(perron.lambda), perron.right, perron.left, {}, 1.0, 0, graph};
  state.mu.resize(state.m.size());
  for (std::size_t i = 0; i < state.m.size(); ++i) state.mu[i] = state.h[i] * state.m[i];
  auto scan = gibbs_scan(state, options.scan_length, options.scan_budget);
  state.q_gibbs = scan.q();
  state.q_scan_length = scan.length;
  return state;
}

double cylinder_measure(const GibbsState& state, MeasureKind which, std::span<const Symbol> w) {
  const auto& graph = state.graph;
  const auto& sub = graph.subshift();
  if (w.empty()) return 1.0;
  if (!is_admissible(w, sub)) throw Error(ErrorCode::Inadmissible, "cylinder word is not admissible");
  const std::size_t len = graph.state_length();
  if (w.size() < len) {
    // Sum over state words extending w.
    double total = 0.0;
    for (std::size_t i = 0; i < graph.size(); ++i) {
      const Word& s = graph.states()[i];
      if (std::equal(w.begin(), w.end(), s.begin()))
        total += which == MeasureKind::Eigen ? state.m[i] : state.mu[i];
    }
    return total;
  }
  const auto& f = graph.potential();
  const std::size_t d = f.depth();
  const std::size_t tail_start = w.size() - len;
  double value = state.m[graph.state_of(w.subspan(tail_start))];
  for (std::size_t k = tail_start; k-- > 0;) value *= std::exp(state.x * f.weight(w.subspan(k, d))) / state.lambda;
  if (which == MeasureKind::Equilibrium) value *= state.h[graph.state_of(w.first(len))];
  return value;
}

std::vector<double> one_cylinder_marginals(const GibbsState& state, std::span<const double> per_state) {
  std::vector<double> out(state.graph.subshift().size(), 0.0);
  for (std::size_t i = 0; i < state.graph.size(); ++i) out[state.graph.states()[i].front()] += per_state[i];
  return out;
}

double lyapunov(const GibbsState& state) {
  double chi = 0.0;
  for (const auto& e : state.graph.edges())
    chi -= e.weight * state.h[e.row] * std::exp(state.x * e.weight) / state.lambda * state.m[e.col];
  return chi;
}

GibbsScan gibbs_scan(const GibbsState& state, std::size_t max_length, std::size_t budget) {
  const auto& graph = state.graph;
  const auto& sub = graph.subshift();
  const auto& f = graph.potential();

  // Shrink the scan length until the number of cylinders fits the budget.
  std::vector<double> per_symbol(sub.size(), 1.0);
  std::size_t length = 0;
  double cylinders = 0.0;
  while (length < max_length) {
    const double count = std::accumulate(per_symbol.begin(), per_symbol.end(), 0.0);
    if (cylinders + count > static_cast<double>(budget)) break;
    cylinders += count;
    ++length;
    std::vector<double> next(sub.size(), 0.0);
    for (Symbol a = 0; a < sub.size(); ++a)
      for (Symbol b : sub.successors(a)) next[a] += per_symbol[b];
    per_symbol = std::move(next);
  }

  std::vector<std::vector<Word>> tails(sub.size());
  for (Symbol s = 0; s < sub.size(); ++s) tails[s] = continuations(sub, s, f.depth() - 1);

  GibbsScan scan;
  scan.length = length;
  scan.min_ratio = std::numeric_limits<double>::infinity();
  scan.max_ratio = 0.0;
  EnumerationRequest req;
  req.closure = Closure::Free;
  req.max_length = length;
  scan.cylinders = enumerate_admissible(
      sub, req, [](std::span<const Symbol>) { return true; },
      [&](std::span<const Symbol> w) {
        const double mass = cylinder_measure(state, MeasureKind::Eigen, w);
        for (const auto& c : tails[w.back()]) {
          const double s = sum_with_continuation(f, w, c);
          const double ratio = mass * std::exp(static_cast<double>(w.size()) * state.pressure - state.x * s);
          scan.min_ratio = std::min(scan.min_ratio, ratio);
          scan.max_ratio = std::max(scan.max_ratio, ratio);
        }
      });
  return scan;
}

ThermoProfile thermo_profile(const Subshift& sub, const LocallyConstantPotential& f, const GibbsOptions& options) {
  const auto root = find_delta(sub, f);
  ThermoProfile out{root.delta, root.pressure_at_delta, gibbs_profile(sub, f, root.delta, options), 0.0, 0.0};
  out.chi = lyapunov(out.gibbs);
  PressureFunction p(sub, f);
  constexpr double step = 1e-6;
  out.chi_finite_difference = -(p(root.delta + step) - p(root.delta - step)) / (2.0 * step);
  return out;
}

}  // namespace thermoform
