#include "thermoform/poincare.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "thermoform/error.hpp"
#include "thermoform/thermo.hpp"
#include "thermoform/transfer.hpp"

namespace thermoform {

namespace {

std::size_t state_length_for(const LocallyConstantPotential& f, const TargetSet& target) {
  const std::size_t d = f.depth();
  return std::max({d > 1 ? d - 1 : std::size_t{1}, std::size_t{1}, target.is_all() ? 0 : target.max_word_length()});
}

std::vector<double> indicator(const TransferGraph& graph, const TargetSet& target) {
  std::vector<double> g(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const Word& s = graph.states()[i];
    g[i] = target.contains_stream([&](std::size_t k) { return s[k]; }) ? 1.0 : 0.0;
  }
  return g;
}

double target_measure(const GibbsState& state, const TargetSet& target) {
  if (target.is_all()) return 1.0;
  double m = 0.0;
  for (const auto& w : target.words()) m += cylinder_measure(state, MeasureKind::Eigen, w);
  return m;
}

}  // namespace

PoincareValue poincare_series(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                              const TargetSet& target, std::complex<double> s, double delta, SeriesMode mode,
                              std::size_t terms) {
  if (!(s.real() > delta))
    throw Error(ErrorCode::OnOrLeftOfCriticalLine, "Re s = " + std::to_string(s.real()) + " is not right of delta");
  validate_tail(rho, sub);
  const TransferGraph graph(sub, f, state_length_for(f, target));
  const auto g = indicator(graph, target);
  const std::size_t at = graph.state_of(rho);
  const auto n = static_cast<Eigen::Index>(graph.size());

  PoincareValue out;
  if (mode == SeriesMode::ClosedForm) {
    // Functions evolve by the transpose of the weighted incidence matrix.
    Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& e : graph.edges())
      system(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) -= std::exp(s * e.weight);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
    if (!(lu.rcond() > 1e-14)) throw Error(ErrorCode::SingularResolvent, "I - L_s is numerically singular");
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = g[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd x = lu.solve(rhs);
    out.value = x(static_cast<Eigen::Index>(at)) - rhs(static_cast<Eigen::Index>(at));
    return out;
  }

  std::vector<std::complex<double>> v(g.begin(), g.end());
  std::vector<std::complex<double>> coeff;
  coeff.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) coeff.push_back(std::exp(s * e.weight));
  for (std::size_t k = 1; k <= terms; ++k) {
    std::vector<std::complex<double>> next(v.size());
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      const auto& e = graph.edges()[j];
      next[e.col] += coeff[j] * v[e.row];
    }
    v = std::move(next);
    out.value += v[at];
  }
  out.terms = terms;
  // |L_s^n 1| <= L_{Re s}^n 1 <= (max h / min h) λ^n with h the positive
  // eigenfunction at Re s.
  const auto perron = perron_data(graph, s.real());
  const auto [lo, hi] = std::minmax_element(perron.left.begin(), perron.left.end());
  out.tail_bound = (*hi / *lo) * std::pow(perron.lambda, static_cast<double>(terms + 1)) / (1.0 - perron.lambda);
  return out;
}

PoincareValue poincare_series(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                              const TargetSet& target, std::complex<double> s, SeriesMode mode, std::size_t terms) {
  return poincare_series(sub, f, rho, target, s, find_delta(sub, f).delta, mode, terms);
}

double ResidueEstimate::relative_error() const noexcept { return std::abs(estimate - predicted) / std::abs(predicted); }

ResidueEstimate residue_estimate(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                                 const TargetSet& target) {
  const auto profile = thermo_profile(sub, f);
  ResidueEstimate r;
  for (std::size_t i = 0; i < r.offsets.size(); ++i) {
    const double eps = r.offsets[i];
    r.samples[i] = eps * poincare_series(sub, f, rho, target, {profile.delta + eps, 0.0}, profile.delta).value.real();
  }
  // The samples are analytic in the offset; offsets shrink by 10 each step.
  const double a1 = (10.0 * r.samples[1] - r.samples[0]) / 9.0;
  const double a2 = (10.0 * r.samples[2] - r.samples[1]) / 9.0;
  r.estimate = (100.0 * a2 - a1) / 99.0;
  const auto& gibbs = profile.gibbs;
  r.predicted = gibbs.h[gibbs.graph.state_of(rho)] * target_measure(gibbs, target) / profile.chi;
  return r;
}

AsymptoticReport asymptotic_report(const Subshift& sub, const LocallyConstantPotential& f, const TailPoint& rho,
                                   const TargetSet& target, double t_lo, double t_hi, const CountOptions& options) {
  validate_tail(rho, sub);
  const auto profile = thermo_profile(sub, f);
  AsymptoticReport rep;
  rep.delta = profile.delta;
  rep.chi = profile.chi;
  rep.h_rho = profile.gibbs.h[profile.gibbs.graph.state_of(rho)];
  rep.m_target = target_measure(profile.gibbs, target);
  rep.spectral = d_generic_test(sub, f);
  rep.constants = tauberian_constants(rep.delta, rep.spectral);
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.lower_bound = rep.constants.c_delta * rep.h_rho * rep.m_target / rep.chi;
  rep.upper_bound = rep.lower_bound + rep.constants.upper_addend * rep.h_rho / rep.chi;

  CountQuery q;
  q.kind = CountKind::Plain;
  q.tail = rho;
  q.target = target;
  q.threshold = t_hi;
  // Jumps are counted from T = 0 so that short windows far out (few but
  // widely spaced jumps) still qualify; the extrema use the window only.
  auto full = count_series(sub, f, q, 0.0, t_hi, rep.delta, options);
  if (full.rows.size() < 10)
    throw Error(ErrorCode::WindowTooSmall,
                "only " + std::to_string(full.rows.size()) + " jumps up to T = " + std::to_string(t_hi) + ", need 10");
  const auto last_ten = std::vector<SeriesRow>(full.rows.end() - 10, full.rows.end());
  rep.series.delta = full.delta;
  for (const auto& row : full.rows)
    if (row.t >= t_lo - kThresholdSlack) rep.series.rows.push_back(row);
  const auto& rows = rep.series.rows;
  rep.jumps_in_window = rows.size();
  if (rows.empty()) throw Error(ErrorCode::WindowTooSmall, "no jumps inside the window");

  const double mid = 0.5 * (t_lo + t_hi);
  rep.empirical_liminf = std::numeric_limits<double>::infinity();
  rep.empirical_limsup = 0.0;
  for (const auto& row : rows) {
    if (row.t < mid) continue;
    rep.empirical_liminf = std::min(rep.empirical_liminf, row.ratio_before);
    rep.empirical_limsup = std::max(rep.empirical_limsup, row.ratio_after);
  }
  rep.lower_holds = rep.lower_bound <= rep.empirical_liminf * (1.0 + rep.tolerance);
  rep.upper_holds = rep.empirical_limsup <= rep.upper_bound * (1.0 + rep.tolerance);

  if (rep.spectral.kind == SpectralKind::DGeneric) {
    rep.single_limit_checked = true;
    for (const auto& row : last_ten)
      rep.single_limit_max_deviation =
          std::max(rep.single_limit_max_deviation, std::abs(row.ratio_after / rep.lower_bound - 1.0));
    rep.single_limit_holds = rep.single_limit_max_deviation <= 0.05;
  }
  return rep;
}

}  // namespace thermoform
