#include "thermoform/report.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "thermoform/error.hpp"

namespace thermoform {

namespace {

using json = nlohmann::json;

std::string g15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Infinite y0 (D-generic) has no JSON number; emit null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_csv(const CountSeries& series) {
  std::string out = "T,N_before,N_after,ratio_before,ratio_after\n";
  for (const auto& r : series.rows) {
    out += g15(r.t) + "," + std::to_string(r.before) + "," + std::to_string(r.after) + "," + g15(r.ratio_before) +
           "," + g15(r.ratio_after) + "\n";
  }
  return out;
}

void emit_csv(const CountSeries& series, const std::string& path) {
  if (series.rows.empty()) throw Error(ErrorCode::EmptySeries, "no jumps in the requested window");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << format_csv(series);
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

CountSeries parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "T,N_before,N_after,ratio_before,ratio_after")
    throw Error(ErrorCode::Config, "csv: unexpected header");
  CountSeries series;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    SeriesRow r;
    unsigned long long before = 0, after = 0;
    if (std::sscanf(line.c_str(), "%lf,%llu,%llu,%lf,%lf", &r.t, &before, &after, &r.ratio_before, &r.ratio_after) != 5)
      throw Error(ErrorCode::Config, "csv: malformed row at line " + std::to_string(number));
    r.before = before;
    r.after = after;
    series.rows.push_back(r);
  }
  return series;
}

std::string report_json(const SystemConfig& config, const std::string& target_name, const AsymptoticReport& r) {
  json j;
  j["system"] = config.name;
  j["config"] = config.source;
  j["tail"] = {{"prefix", config.subshift().format(config.tail.prefix)},
               {"cycle", config.subshift().format(config.tail.cycle)}};
  j["target"] = target_name.empty() ? "all" : target_name;
  j["window"] = {r.t_lo, r.t_hi};
  j["delta"] = r.delta;
  j["chi"] = r.chi;
  j["h_rho"] = r.h_rho;
  j["m_target"] = r.m_target;
  j["spectral"] = {{"kind", to_string(r.spectral.kind)},
                   {"gap", r.spectral.gap},
                   {"y0", finite_or_null(r.spectral.y0)},
                   {"y1", finite_or_null(r.spectral.y1)},
                   {"cycles", r.spectral.cycle_sums.size()}};
  j["constants"] = {{"c_delta", r.constants.c_delta},
                    {"c_1", r.constants.c_1},
                    {"c_2", r.constants.c_2},
                    {"upper_addend", r.constants.upper_addend}};
  j["bounds"] = {r.lower_bound, r.upper_bound};
  j["empirical"] = {{"liminf", r.empirical_liminf}, {"limsup", r.empirical_limsup}, {"jumps", r.jumps_in_window}};
  json verdicts = {{"tolerance", r.tolerance}, {"lower", r.lower_holds}, {"upper", r.upper_holds}};
  if (r.single_limit_checked) {
    verdicts["single_limit"] = {{"holds", r.single_limit_holds},
                                {"max_deviation", r.single_limit_max_deviation},
                                {"heuristic", true},
                                {"note", "finite-T check of the single limit; no convergence rate is known"}};
  }
  verdicts["all"] = r.all_hold();
  j["verdicts"] = verdicts;
  return j.dump(2) + "\n";
}

std::string spectrum_json(const SystemConfig& config, const SpectralVerdict& verdict, const CriticalLineScan& scan,
                          double delta, double y_max) {
  json j;
  j["system"] = config.name;
  j["delta"] = delta;
  j["y_max"] = y_max;
  j["kind"] = to_string(verdict.kind);
  j["gap"] = verdict.gap;
  j["predicted_first_crossing"] = finite_or_null(verdict.y1);
  j["crossings"] = scan.crossings;
  j["max_modulus"] = scan.max_modulus;
  j["modulus_bound_holds"] = scan.modulus_bound_holds;
  j["points"] = scan.points.size();
  j["failed_points"] = scan.failed_points;
  return j.dump(2) + "\n";
}

}  // namespace thermoform
