#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoform/potential.hpp"
#include "thermoform/shift.hpp"

namespace thermoform {

/// A system description loaded from a JSON config file.
///
/// Schema (exactly one of "ifs" / "explicit"):
///
///     {
///       "name": "cantor13",
///       "alpha": 1.0,
///       "ifs": {"maps": [{"symbol": "0", "slope": "1/3", "offset": 0}, ...],
///               "allow_overlap": false},
///       "explicit": {"symbols": ["0", "1"], "incidence": [[1, 1], [1, 0]],
///                    "potential": {"depth": 1, "weights": {"0": "log(1/2)", "1": -0.7}}},
///       "tail": {"prefix": "", "cycle": "0"},
///       "targets": {"zero": ["0"], "one": ["1"]}
///     }
///
/// Reals may be JSON numbers or strings of the form "p/q", "log(p/q)",
/// "-log(p/q)" or a decimal literal, optionally multiplied as "a*b".
struct SystemConfig {
  std::string name;
  std::string source;
  double alpha = 1.0;
  std::optional<AffineIfsSpec> ifs;
  bool allow_overlap = false;
  ValidatedSubshift shift;
  LocallyConstantPotential potential;
  TailPoint tail;
  std::map<std::string, TargetSet> targets;
  std::vector<std::string> warnings;

  const Subshift& subshift() const noexcept { return shift.subshift; }
  /// "all" (or an empty name) is the whole space; otherwise a named target.
  /// Throws Config for unknown names.
  TargetSet target(std::string_view name) const;
};

/// Evaluates the real-number forms accepted in configs. Throws Config.
double parse_real(std::string_view text);

/// Parses config text. `source` names the input in diagnostics; parse
/// errors carry line and column, semantic errors the field path and the
/// line of the offending key. `force_allow_overlap` overrides the file.
SystemConfig parse_config(std::string_view text, const std::string& source = "<config>",
                          bool force_allow_overlap = false);

/// Reads and parses a config file. Throws Io or Config.
SystemConfig load_config(const std::string& path, bool force_allow_overlap = false);

}  // namespace thermoform
