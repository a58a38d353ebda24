#pragma once

#include <string>
#include <string_view>

#include "thermoform/config.hpp"
#include "thermoform/counting.hpp"
#include "thermoform/poincare.hpp"
#include "thermoform/spectral.hpp"

namespace thermoform {

/// Header `T,N_before,N_after,ratio_before,ratio_after`, one row per jump,
/// reals with 15 significant digits, each line ending in '\n'.
std::string format_csv(const CountSeries& series);

/// Writes format_csv(series) to `path`. Throws EmptySeries (nothing is
/// written) or Io.
void emit_csv(const CountSeries& series, const std::string& path);

/// Inverse of format_csv up to the printed precision; delta is not stored
/// and comes back as zero. Throws Config on malformed input.
CountSeries parse_csv(std::string_view text);

/// Structured report with inputs, constants, bounds and verdicts.
std::string report_json(const SystemConfig& config, const std::string& target_name, const AsymptoticReport& report);

/// Critical-line scan summary.
std::string spectrum_json(const SystemConfig& config, const SpectralVerdict& verdict, const CriticalLineScan& scan,
                          double delta, double y_max);

}  // namespace thermoform
