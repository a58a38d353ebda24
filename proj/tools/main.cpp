// thermoform: command-line front end for the thermoform library.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thermoform/config.hpp>
#include <thermoform/counting.hpp>
#include <thermoform/error.hpp>
#include <thermoform/poincare.hpp>
#include <thermoform/report.hpp>
#include <thermoform/spectral.hpp>
#include <thermoform/thermo.hpp>

namespace {

using namespace thermoform;
using json = nlohmann::json;

constexpr int kVerdictFailed = 1;
constexpr int kError = 2;

struct Globals {
  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  bool oracle = false;
  bool allow_overlap = false;
};

std::string g15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Prints to stdout and, under --out, also writes <out>/<name>.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  std::cout << text;
  if (g.out_dir.empty()) return;
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::BadQuery, "window must look like a:b");
  return {parse_real(text.substr(0, colon)), parse_real(text.substr(colon + 1))};
}

// "a:b:n" is an n-point grid, otherwise a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> xs;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    const double a = parse_real(text.substr(0, c1));
    const double b = parse_real(text.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(text.substr(c2 + 1));
    if (n < 1) throw Error(ErrorCode::BadQuery, "grid needs at least one point");
    for (int i = 0; i < n; ++i) xs.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return xs;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) xs.push_back(parse_real(item));
  return xs;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("THERMOFORM_SEED");
  return s ? std::strtoull(s, nullptr, 10) : 0;
}

int cmd_validate(const Globals& g, const SystemConfig& cfg) {
  const auto& sub = cfg.subshift();
  const auto holder = holder_data(cfg.potential, sub.alpha());
  json j;
  j["system"] = cfg.name;
  j["symbols"] = sub.names();
  j["edges"] = sub.edge_count();
  j["irreducible"] = true;
  j["max_connecting_word"] = cfg.shift.witnesses.max_length();
  j["alpha"] = sub.alpha();
  j["depth"] = cfg.potential.depth();
  j["weights_negative"] = cfg.potential.all_negative();
  j["v_alpha"] = holder.v_alpha;
  j["k_f"] = holder.k_f;
  j["tail"] = {{"prefix", sub.format(cfg.tail.prefix)}, {"cycle", sub.format(cfg.tail.cycle)}};
  j["targets"] = json::array();
  for (const auto& [name, t] : cfg.targets) j["targets"].push_back(name);
  j["warnings"] = cfg.warnings;
  emit(g, "validate.json", j.dump(2) + "\n");
  return 0;
}

int cmd_pressure(const Globals& g, const SystemConfig& cfg, const std::string& grid) {
  PressureFunction p(cfg.subshift(), cfg.potential);
  std::string out = "x,P\n";
  for (double x : parse_grid(grid)) out += g15(x) + "," + g15(p(x)) + "\n";
  emit(g, "pressure.csv", out);
  return 0;
}

int cmd_dimension(const Globals& g, const SystemConfig& cfg) {
  const auto root = find_delta(cfg.subshift(), cfg.potential);
  json j;
  j["system"] = cfg.name;
  j["delta"] = root.delta;
  j["pressure_at_delta"] = root.pressure_at_delta;
  j["pressure_at_zero"] = root.pressure_at_zero;
  j["bisections"] = root.bisections;
  std::cout << "delta = " << g15(root.delta) << "\n";
  if (!g.out_dir.empty()) emit(g, "dimension.json", j.dump(2) + "\n");
  return 0;
}

int cmd_gibbs(const Globals& g, const SystemConfig& cfg, std::size_t maxlen) {
  const auto& sub = cfg.subshift();
  GibbsOptions options;
  options.scan_length = maxlen;
  const auto profile = thermo_profile(sub, cfg.potential, options);
  const auto& st = profile.gibbs;
  json j;
  j["system"] = cfg.name;
  j["delta"] = profile.delta;
  j["lambda"] = st.lambda;
  j["chi"] = profile.chi;
  j["chi_finite_difference"] = profile.chi_finite_difference;
  json states = json::array();
  for (std::size_t i = 0; i < st.graph.size(); ++i)
    states.push_back({{"state", sub.format(st.graph.states()[i])}, {"m", st.m[i]}, {"h", st.h[i]}, {"mu", st.mu[i]}});
  j["states"] = states;
  j["m_symbols"] = one_cylinder_marginals(st, st.m);
  j["mu_symbols"] = one_cylinder_marginals(st, st.mu);
  j["q_gibbs"] = st.q_gibbs;
  j["q_scan_length"] = st.q_scan_length;
  emit(g, "gibbs.json", j.dump(2) + "\n");
  return std::isfinite(st.q_gibbs) ? 0 : kVerdictFailed;
}

int cmd_spectrum(const Globals& g, const SystemConfig& cfg, double y_max, std::size_t points) {
  const auto& sub = cfg.subshift();
  const double delta = find_delta(sub, cfg.potential).delta;
  const auto verdict = d_generic_test(sub, cfg.potential);
  const auto scan = critical_line_scan(sub, cfg.potential, delta, y_max, points, seed_from_env());
  emit(g, "spectrum.json", spectrum_json(cfg, verdict, scan, delta, y_max));
  bool ok = scan.modulus_bound_holds;
  if (verdict.kind == SpectralKind::DGeneric) {
    ok = ok && scan.crossings.empty();
  } else if (verdict.y1 <= y_max) {
    ok = ok && !scan.crossings.empty() && std::abs(scan.crossings.front() - verdict.y1) <= 1e-6;
  }
  return ok ? 0 : kVerdictFailed;
}

CountQuery make_query(const SystemConfig& cfg, const std::string& kind_name, double threshold, std::size_t length,
                      const std::string& target) {
  const auto kind = parse_count_kind(kind_name);
  if (!kind) throw Error(ErrorCode::BadQuery, "unknown count kind '" + kind_name + "'");
  CountQuery q;
  q.kind = *kind;
  if (!is_periodic(*kind)) q.tail = cfg.tail;
  q.target = cfg.target(target);
  q.length = length;
  q.threshold = threshold;
  return q;
}

int cmd_count(const Globals& g, const SystemConfig& cfg, const std::string& kind, const std::string& t,
              std::size_t length, const std::string& target) {
  const auto q = make_query(cfg, kind, parse_real(t), length, target);
  const auto n = count(cfg.subshift(), cfg.potential, q, CountOptions{g.threads});
  json j;
  j["kind"] = to_string(q.kind);
  j["T"] = q.threshold;
  j["target"] = target.empty() ? "all" : target;
  if (q.length) j["length"] = q.length;
  j["count"] = n;
  int status = 0;
  if (g.oracle) {
    const auto m = count_oracle(cfg.subshift(), cfg.potential, q);
    j["oracle"] = m;
    j["oracle_agrees"] = (m == n);
    if (m != n) status = kVerdictFailed;
  }
  std::cout << n << "\n";
  if (!g.out_dir.empty()) emit(g, "count.json", j.dump(2) + "\n");
  else if (g.oracle) std::cout << "oracle " << j["oracle"] << (status ? " MISMATCH" : " agrees") << "\n";
  return status;
}

int cmd_series(const Globals& g, const SystemConfig& cfg, const std::string& window, const std::string& target) {
  const auto [lo, hi] = parse_window(window);
  const auto& sub = cfg.subshift();
  const double delta = find_delta(sub, cfg.potential).delta;
  CountQuery q;
  q.kind = CountKind::Plain;
  q.tail = cfg.tail;
  q.target = cfg.target(target);
  q.threshold = hi;
  const auto series = count_series(sub, cfg.potential, q, lo, hi, delta, CountOptions{g.threads});
  if (series.rows.empty()) throw Error(ErrorCode::EmptySeries, "no jumps in the requested window");
  std::cout << format_csv(series);
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    emit_csv(series, (std::filesystem::path(g.out_dir) / "series.csv").string());
  }
  return 0;
}

int cmd_report(const Globals& g, const SystemConfig& cfg, const std::string& window, const std::string& target) {
  const auto [lo, hi] = parse_window(window);
  const auto rep =
      asymptotic_report(cfg.subshift(), cfg.potential, cfg.tail, cfg.target(target), lo, hi, CountOptions{g.threads});
  emit(g, "report.json", report_json(cfg, target, rep));
  if (!g.out_dir.empty()) emit_csv(rep.series, (std::filesystem::path(g.out_dir) / "series.csv").string());
  return rep.all_hold() ? 0 : kVerdictFailed;
}

int cmd_probe(const Globals& g, const SystemConfig& cfg, const std::string& t) {
  const auto probe = probe_length(cfg.subshift(), cfg.potential, cfg.tail, parse_real(t));
  std::string out = "# T=" + g15(probe.threshold) + " m=" + std::to_string(probe.extremes.shortest_cutoff) +
                    " M=" + std::to_string(probe.extremes.longest) + " N=" + std::to_string(probe.total) +
                    " (empirical probe, not a verdict)\n";
  out += "i,N_i,N_over_N_i\n";
  for (const auto& r : probe.rows) out += std::to_string(r.length) + "," + std::to_string(r.count) + "," + g15(r.ratio_total) + "\n";
  emit(g, "probe_length.csv", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermoform: pressure, Gibbs states, spectra and exact orbit counts for subshifts of finite type"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("config", g.config_path, "system config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "also write artifacts into this directory");
  app.add_option("--threads", g.threads, "worker threads for counting")->check(CLI::PositiveNumber);
  app.add_flag("--oracle", g.oracle, "cross-check counts against brute force");
  app.add_flag("--allow-overlap", g.allow_overlap, "downgrade open-set-condition violations to warnings");

  auto* validate = app.add_subcommand("validate", "check the shift, potential, tail and targets");

  std::string grid = "0:2:21";
  auto* pressure = app.add_subcommand("pressure", "P(x) on a grid");
  pressure->add_option("--x", grid, "grid a:b:n or list x1,x2,...");

  auto* dimension = app.add_subcommand("dimension", "Bowen root delta");

  std::size_t maxlen = 12;
  auto* gibbs = app.add_subcommand("gibbs", "Gibbs state at delta");
  gibbs->add_option("--maxlen", maxlen, "cylinder length for the Gibbs constant scan");

  double y_max = 20.0;
  std::size_t points = 2000;
  auto* spectrum = app.add_subcommand("spectrum", "critical-line scan of the leading eigenvalue");
  spectrum->add_option("--ymax", y_max, "scan y in (0, ymax]");
  spectrum->add_option("--points", points, "grid points");

  std::string kind = "plain", t_text, target;
  std::size_t length = 0;
  auto* count_cmd = app.add_subcommand("count", "exact counting function");
  count_cmd->add_option("--kind", kind, "plain|initial-block|fixed-length|periodic|periodic-initial-block|periodic-fixed-length (or a,c,d,e,f,g)");
  count_cmd->add_option("--T", t_text, "threshold T")->required();
  count_cmd->add_option("--length", length, "word length q for fixed-length kinds");
  count_cmd->add_option("--target", target, "named target (default: all)");

  std::string window;
  auto* series = app.add_subcommand("series", "jump series of N(T) e^{-delta T}");
  series->add_option("--window", window, "a:b")->required();
  series->add_option("--target", target, "named target (default: all)");

  auto* report = app.add_subcommand("report", "asymptotic sandwich report");
  report->add_option("--window", window, "a:b")->required();
  report->add_option("--target", target, "named target (default: all)");

  auto* probe = app.add_subcommand("probe-length", "word-length statistics at T");
  probe->add_option("--T", t_text, "threshold T")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = load_config(g.config_path, g.allow_overlap);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    if (*validate) return cmd_validate(g, cfg);
    if (*pressure) return cmd_pressure(g, cfg, grid);
    if (*dimension) return cmd_dimension(g, cfg);
    if (*gibbs) return cmd_gibbs(g, cfg, maxlen);
    if (*spectrum) return cmd_spectrum(g, cfg, y_max, points);
    if (*count_cmd) return cmd_count(g, cfg, kind, t_text, length, target);
    if (*series) return cmd_series(g, cfg, window, target);
    if (*report) return cmd_report(g, cfg, window, target);
    if (*probe) return cmd_probe(g, cfg, t_text);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
