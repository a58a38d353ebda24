#include "thermoform/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "thermoform/error.hpp"

namespace thermoform {

std::string to_string(SpectralKind kind) { return kind == SpectralKind::Lattice ? "lattice" : "d-generic"; }

double real_gcd(double a, double b, double eps) {
  a = std::abs(a);
  b = std::abs(b);
  if (a < b) std::swap(a, b);
  while (b > eps) {
    double r = std::fmod(a, b);
    r = std::min(r, b - r);
    a = b;
    b = r;
  }
  return a;
}

namespace {

struct CycleSearch {
  const TransferGraph& graph;
  std::vector<std::vector<std::pair<std::size_t, double>>> out;  // successors with weight
  std::vector<bool> on_path;
  std::vector<double> sums;
  std::size_t cap;
  std::size_t root = 0;

  void dfs(std::size_t v, double acc) {
    if (sums.size() >= cap) return;
    for (auto [next, w] : out[v]) {
      if (next == root) {
        sums.push_back(acc + w);
        if (sums.size() >= cap) return;
      } else if (next > root && !on_path[next]) {
        on_path[next] = true;
        dfs(next, acc + w);
        on_path[next] = false;
      }
    }
  }
};

}  // namespace

std::vector<double> simple_cycle_sums(const TransferGraph& graph, std::size_t cap) {
  // Walk the orbit forward: an edge (row ← col) means state `row` is
  // followed by state `col`, and contributes the weight of the window at row.
  CycleSearch search{graph, std::vector<std::vector<std::pair<std::size_t, double>>>(graph.size()),
                     std::vector<bool>(graph.size(), false), {}, cap};
  for (const auto& e : graph.edges()) search.out[e.row].emplace_back(e.col, e.weight);
  for (std::size_t v = 0; v < graph.size() && search.sums.size() < cap; ++v) {
    search.root = v;
    search.on_path[v] = true;
    search.dfs(v, 0.0);
    search.on_path[v] = false;
  }
  return search.sums;
}

namespace {

// Edge weights normalized by a spanning-tree potential; on a strongly
// connected digraph they generate the same group as the cycle sums.
std::vector<double> fundamental_values(const TransferGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> phi(n, 0.0);
  std::vector<bool> seen(n, false);
  std::vector<std::vector<const TransferEdge*>> out(n);
  for (const auto& e : graph.edges()) out[e.row].push_back(&e);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const auto* e : out[v]) {
      if (!seen[e->col]) {
        seen[e->col] = true;
        phi[e->col] = phi[v] + e->weight;
        stack.push_back(e->col);
      }
    }
  }
  std::vector<double> values;
  for (const auto& e : graph.edges()) {
    const double v = phi[e.row] + e.weight - phi[e.col];
    if (std::abs(v) > 0.0) values.push_back(v);
  }
  return values;
}

}  // namespace

SpectralVerdict d_generic_test(const Subshift& sub, const LocallyConstantPotential& f, double tol) {
  TransferGraph graph(sub, f);
  constexpr std::size_t kCap = 20000;
  SpectralVerdict verdict;
  verdict.tolerance = tol;
  verdict.cycle_sums = simple_cycle_sums(graph, kCap);

  std::vector<double> evidence = verdict.cycle_sums;
  if (verdict.cycle_sums.size() >= kCap) {
    auto extra = fundamental_values(graph);
    evidence.insert(evidence.end(), extra.begin(), extra.end());
  }
  double scale = 0.0;
  for (double s : evidence) scale = std::max(scale, std::abs(s));
  if (scale == 0.0) throw Error(ErrorCode::NotRegular, "all periodic sums vanish");
  const double eps = tol * scale;
  verdict.resolution = std::sqrt(tol) * scale;

  double g = 0.0;
  for (double s : evidence) {
    if (std::abs(s) <= eps) continue;
    g = g == 0.0 ? std::abs(s) : real_gcd(g, s, eps);
  }
  if (g < verdict.resolution) return verdict;

  // Least-squares refit of Δ against the integer multipliers.
  double num = 0.0, den = 0.0;
  for (double s : evidence) {
    const double k = std::round(std::abs(s) / g);
    num += k * std::abs(s);
    den += k * k;
  }
  const double gap = num / den;
  double residual = 0.0;
  for (double s : evidence) residual = std::max(residual, std::abs(std::abs(s) - std::round(std::abs(s) / gap) * gap));
  if (residual > eps) return verdict;

  verdict.kind = SpectralKind::Lattice;
  verdict.gap = gap;
  verdict.y1 = 2.0 * std::numbers::pi / gap;
  verdict.y0 = 1.0 / gap;
  verdict.max_residual = residual;
  return verdict;
}

namespace {

using cvec = std::vector<std::complex<double>>;

double norm2(const cvec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

LeadingEigenvalue leading_eigenvalue(const TransferGraph& graph, std::complex<double> s, std::uint64_t seed,
                                     double tolerance) {
  const std::size_t n = graph.size();
  constexpr std::size_t kIterations = 5000;
  constexpr std::size_t kRestarts = 3;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;

  LeadingEigenvalue out;
  for (std::size_t attempt = 0; attempt <= kRestarts; ++attempt) {
    cvec v(n);
    for (auto& z : v) z = {gauss(rng), gauss(rng)};
    double nv = norm2(v);
    for (auto& z : v) z /= nv;
    for (std::size_t it = 1; it <= kIterations; ++it) {
      cvec y = graph.apply(s, v);
      std::complex<double> lambda = 0.0;
      for (std::size_t i = 0; i < n; ++i) lambda += std::conj(v[i]) * y[i];
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) resid += std::norm(y[i] - lambda * v[i]);
      resid = std::sqrt(resid);
      const double ny = norm2(y);
      out.iterations += 1;
      if (resid <= tolerance * std::max(std::abs(lambda), 1e-300)) {
        out.value = lambda;
        out.restarts = attempt;
        return out;
      }
      if (ny == 0.0) {
        out.value = 0.0;
        out.restarts = attempt;
        return out;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / ny;
    }
  }

  // Modulus ties on the circle defeat power iteration; fall back to QR.
  Eigen::MatrixXcd dense(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto entries = graph.dense(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i * n + j];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigen-solve failed");
  const auto& ev = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i)) > std::abs(ev(best))) best = i;
  out.value = ev(best);
  out.restarts = kRestarts;
  out.dense_fallback = true;
  return out;
}

CriticalLineScan critical_line_scan(const Subshift& sub, const LocallyConstantPotential& f, double delta, double y_max,
                                    std::size_t n_points, std::uint64_t seed) {
  if (n_points == 0 || !(y_max > 0.0)) throw Error(ErrorCode::BadQuery, "scan needs y_max > 0 and at least one point");
  TransferGraph graph(sub, f);
  CriticalLineScan scan;
  auto distance_to_one = [&](double y) {
    return std::abs(leading_eigenvalue(graph, {delta, y}, seed).value - 1.0);
  };

  scan.points.reserve(n_points);
  for (std::size_t j = 1; j <= n_points; ++j) {
    ScanPoint p;
    p.y = y_max * static_cast<double>(j) / static_cast<double>(n_points);
    try {
      p.lambda = leading_eigenvalue(graph, {delta, p.y}, seed).value;
      p.modulus = std::abs(p.lambda);
      p.near_one = std::abs(p.lambda - 1.0) < 1e-6;
      scan.max_modulus = std::max(scan.max_modulus, p.modulus);
    } catch (const Error& e) {
      p.ok = false;
      p.error = e.what();
      ++scan.failed_points;
    }
    scan.points.push_back(p);
  }
  scan.modulus_bound_holds = scan.max_modulus <= 1.0 + 1e-9;

  const double step = y_max / static_cast<double>(n_points);
  auto gap_at = [&](std::size_t j) {
    return scan.points[j].ok ? std::abs(scan.points[j].lambda - 1.0) : std::numeric_limits<double>::infinity();
  };
  for (std::size_t j = 0; j < scan.points.size(); ++j) {
    const double g = gap_at(j);
    const bool left_ok = j == 0 || g <= gap_at(j - 1);
    const bool right_ok = j + 1 == scan.points.size() || g <= gap_at(j + 1);
    if (!std::isfinite(g) || !left_ok || !right_ok) continue;
    // Golden-section search for the minimum of |λ - 1| around the grid point.
    // y = 0 is the trivial solution λ(δ) = 1; stay half a step away from it.
    double a = std::max(scan.points[j].y - step, 0.5 * step);
    double b = std::min(scan.points[j].y + step, y_max);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = distance_to_one(c), fd = distance_to_one(d);
    while (b - a > 1e-12) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = distance_to_one(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = distance_to_one(d);
      }
    }
    const double y_star = 0.5 * (a + b);
    if (distance_to_one(y_star) < 1e-6) {
      if (scan.crossings.empty() || std::abs(scan.crossings.back() - y_star) > 1e-9) scan.crossings.push_back(y_star);
    }
  }
  return scan;
}

TauberianConstants tauberian_constants(double delta, double y0) {
  if (!(delta > 0.0)) throw Error(ErrorCode::BadQuery, "delta must be positive");
  TauberianConstants c;
  if (std::isinf(y0)) {
    c.c_delta = 1.0 / delta;
    c.c_1 = 1.0;
    c.c_2 = 1.0;
    c.upper_addend = 0.0;
    return c;
  }
  const double inv = 1.0 / y0;
  c.c_delta = inv / std::expm1(delta * inv);
  c.c_1 = inv / std::expm1(inv);
  c.c_2 = c.c_1 * std::exp(inv);
  c.upper_addend = inv;
  return c;
}

TauberianConstants tauberian_constants(double delta, const SpectralVerdict& verdict) {
  return tauberian_constants(delta, verdict.kind == SpectralKind::Lattice ? verdict.y0
                                                                          : std::numeric_limits<double>::infinity());
}

}  // namespace thermoform
