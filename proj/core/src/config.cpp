#include "thermoform/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "thermoform/counting.hpp"
#include "thermoform/error.hpp"

namespace thermoform {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_decimal(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw Error(ErrorCode::Config, "not a number: '" + s + "'");
  return v;
}

double parse_ratio(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(trim(s));
  const double den = parse_decimal(trim(std::string_view(s).substr(slash + 1)));
  if (den == 0.0) throw Error(ErrorCode::Config, "zero denominator in '" + s + "'");
  return parse_decimal(trim(std::string_view(s).substr(0, slash))) / den;
}

// Resolves diagnostics to the line of the first occurrence of a key.
class Locator {
 public:
  Locator(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& key, const std::string& what) const {
    std::string where = source_;
    if (auto line = line_of("\"" + key + "\"")) where += ":" + std::to_string(*line);
    throw Error(ErrorCode::Config, where + ": field '" + path + "': " + what);
  }

  std::string position(std::size_t byte) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text_.size()); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return source_ + ":" + std::to_string(line) + ":" + std::to_string(col);
  }

 private:
  std::optional<std::size_t> line_of(const std::string& needle) const {
    const auto at = text_.find(needle);
    if (at == std::string_view::npos) return std::nullopt;
    return static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(at), '\n')) + 1;
  }

  std::string_view text_;
  std::string source_;
};

struct Reader {
  const Locator& loc;

  const json& field(const json& obj, const std::string& path, const std::string& key) const {
    if (!obj.is_object()) loc.fail(path, key, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) loc.fail(path.empty() ? key : path + "." + key, key, "missing");
    return *it;
  }

  double real(const json& v, const std::string& path, const std::string& key) const {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) loc.fail(path, key, "expected a number or a numeric string");
    try {
      return parse_real(v.get<std::string>());
    } catch (const Error& e) {
      loc.fail(path, key, e.what());
    }
  }

  std::string text(const json& v, const std::string& path, const std::string& key) const {
    if (!v.is_string()) loc.fail(path, key, "expected a string");
    return v.get<std::string>();
  }

  Word word(const Subshift& sub, const json& v, const std::string& path, const std::string& key) const {
    const auto s = text(v, path, key);
    try {
      return sub.parse_word(s);
    } catch (const Error& e) {
      loc.fail(path, key, e.what());
    }
  }
};

}  // namespace

double parse_real(std::string_view input) {
  std::string s = trim(input);
  if (const auto star = s.find('*'); star != std::string::npos)
    return parse_real(std::string_view(s).substr(0, star)) * parse_real(std::string_view(s).substr(star + 1));
  double sign = 1.0;
  if (!s.empty() && s.front() == '-' && s.size() > 1 && s[1] == 'l') {
    sign = -1.0;
    s = trim(std::string_view(s).substr(1));
  }
  if (s.rfind("log(", 0) == 0) {
    if (s.back() != ')') throw Error(ErrorCode::Config, "unbalanced parenthesis in '" + std::string(input) + "'");
    const double arg = parse_ratio(trim(std::string_view(s).substr(4, s.size() - 5)));
    if (!(arg > 0.0)) throw Error(ErrorCode::Config, "log of a nonpositive number in '" + std::string(input) + "'");
    return sign * std::log(arg);
  }
  return sign * parse_ratio(s);
}

TargetSet SystemConfig::target(std::string_view name) const {
  if (name.empty() || name == "all") return TargetSet::all();
  auto it = targets.find(std::string(name));
  if (it == targets.end()) throw Error(ErrorCode::Config, "unknown target '" + std::string(name) + "'");
  return it->second;
}

SystemConfig parse_config(std::string_view text, const std::string& source, bool force_allow_overlap) {
  Locator loc(text, source);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    throw Error(ErrorCode::Config, loc.position(e.byte > 0 ? e.byte - 1 : 0) + ": " + msg);
  }
  if (!doc.is_object()) throw Error(ErrorCode::Config, source + ": top level must be an object");
  Reader rd{loc};

  SystemConfig cfg;
  cfg.source = source;
  cfg.name = doc.contains("name") ? rd.text(doc["name"], "name", "name") : source;
  cfg.alpha = doc.contains("alpha") ? rd.real(doc["alpha"], "alpha", "alpha") : 1.0;

  const bool has_ifs = doc.contains("ifs");
  const bool has_explicit = doc.contains("explicit");
  if (has_ifs == has_explicit) loc.fail("ifs|explicit", has_ifs ? "explicit" : "ifs", "exactly one of 'ifs' and 'explicit' is required");

  try {
    if (has_ifs) {
      const json& node = doc["ifs"];
      const json& maps = rd.field(node, "ifs", "maps");
      if (!maps.is_array() || maps.empty()) loc.fail("ifs.maps", "maps", "expected a nonempty array");
      AffineIfsSpec spec;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        const std::string path = "ifs.maps[" + std::to_string(i) + "]";
        AffineMap m;
        m.symbol = rd.text(rd.field(maps[i], path, "symbol"), path + ".symbol", "symbol");
        m.slope = rd.real(rd.field(maps[i], path, "slope"), path + ".slope", "slope");
        m.offset = rd.real(rd.field(maps[i], path, "offset"), path + ".offset", "offset");
        spec.maps.push_back(std::move(m));
      }
      cfg.allow_overlap = force_allow_overlap;
      if (node.contains("allow_overlap")) {
        if (!node["allow_overlap"].is_boolean()) loc.fail("ifs.allow_overlap", "allow_overlap", "expected a boolean");
        cfg.allow_overlap = cfg.allow_overlap || node["allow_overlap"].get<bool>();
      }
      auto sys = from_affine_ifs(spec, cfg.allow_overlap, cfg.alpha);
      cfg.ifs = std::move(spec);
      cfg.shift = std::move(sys.shift);
      cfg.potential = std::move(sys.potential);
      cfg.warnings = std::move(sys.warnings);
    } else {
      const json& node = doc["explicit"];
      SubshiftSpec spec;
      spec.alpha = cfg.alpha;
      const json& symbols = rd.field(node, "explicit", "symbols");
      if (!symbols.is_array()) loc.fail("explicit.symbols", "symbols", "expected an array of strings");
      for (std::size_t i = 0; i < symbols.size(); ++i)
        spec.symbols.push_back(rd.text(symbols[i], "explicit.symbols[" + std::to_string(i) + "]", "symbols"));
      const json& inc = rd.field(node, "explicit", "incidence");
      if (!inc.is_array()) loc.fail("explicit.incidence", "incidence", "expected an array of rows");
      for (std::size_t i = 0; i < inc.size(); ++i) {
        if (!inc[i].is_array()) loc.fail("explicit.incidence[" + std::to_string(i) + "]", "incidence", "expected a row");
        std::vector<int> row;
        for (const auto& x : inc[i]) {
          if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1))
            loc.fail("explicit.incidence[" + std::to_string(i) + "]", "incidence", "entries must be 0 or 1");
          row.push_back(x.get<int>());
        }
        spec.incidence.push_back(std::move(row));
      }
      cfg.shift = validate_subshift(spec);
      const auto& sub = cfg.shift.subshift;

      const json& pot = rd.field(node, "explicit", "potential");
      const json& depth = rd.field(pot, "explicit.potential", "depth");
      if (!depth.is_number_integer() || depth.get<long>() < 1)
        loc.fail("explicit.potential.depth", "depth", "expected a positive integer");
      const json& weights = rd.field(pot, "explicit.potential", "weights");
      if (!weights.is_object()) loc.fail("explicit.potential.weights", "weights", "expected an object keyed by words");
      std::map<Word, double> table;
      for (const auto& [key, value] : weights.items()) {
        const std::string path = "explicit.potential.weights." + key;
        Word w;
        try {
          w = sub.parse_word(key);
        } catch (const Error& e) {
          loc.fail(path, key, e.what());
        }
        table[w] = rd.real(value, path, key);
      }
      try {
        cfg.potential = LocallyConstantPotential::from_table(sub, depth.get<std::size_t>(), table);
      } catch (const Error& e) {
        loc.fail("explicit.potential", "potential", e.what());
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    // Drop the code prefix of the inner message; the rethrow adds it back.
    const std::string inner = e.what();
    const auto colon = inner.find(": ");
    throw Error(e.code(), source + ": " + (colon == std::string::npos ? inner : inner.substr(colon + 2)));
  }

  const auto& sub = cfg.shift.subshift;
  if (doc.contains("tail")) {
    const json& t = doc["tail"];
    cfg.tail.prefix = t.contains("prefix") ? rd.word(sub, t["prefix"], "tail.prefix", "prefix") : Word{};
    cfg.tail.cycle = rd.word(sub, rd.field(t, "tail", "cycle"), "tail.cycle", "cycle");
    try {
      validate_tail(cfg.tail, sub);
    } catch (const Error& e) {
      loc.fail("tail", "tail", e.what());
    }
  } else {
    const Word first{0};
    cfg.tail = smallest_continuation(sub, first);
  }

  if (doc.contains("targets")) {
    const json& targets = doc["targets"];
    if (!targets.is_object()) loc.fail("targets", "targets", "expected an object of word lists");
    for (const auto& [name, list] : targets.items()) {
      const std::string path = "targets." + name;
      if (!list.is_array()) loc.fail(path, name, "expected an array of words");
      std::vector<Word> words;
      for (const auto& w : list) words.push_back(rd.word(sub, w, path, name));
      try {
        cfg.targets.emplace(name, TargetSet::of(std::move(words), sub));
      } catch (const Error& e) {
        loc.fail(path, name, e.what());
      }
    }
  }
  return cfg;
}

SystemConfig load_config(const std::string& path, bool force_allow_overlap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path, force_allow_overlap);
}

}  // namespace thermoform
