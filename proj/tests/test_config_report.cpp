#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "systems.hpp"
#include "thermoform/config.hpp"
#include "thermoform/error.hpp"
#include "thermoform/report.hpp"

using namespace thermoform;
using testing_support::kLog2;
using testing_support::kLog3;
using testing_support::load_system;

namespace {

std::string config_error(std::string_view text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an Error");
  return {};
}

CountSeries cantor_series(double t_lo, double t_hi) {
  const auto cantor = load_system("cantor13");
  CountQuery q;
  q.tail = cantor.tail;
  return count_series(cantor.subshift(), cantor.potential, q, t_lo, t_hi, kLog2 / kLog3);
}

}  // namespace

TEST_CASE("real literals") {
  CHECK(parse_real("0.25") == 0.25);
  CHECK(parse_real("1/3") == doctest::Approx(1.0 / 3));
  CHECK(parse_real("log(1/2)") == doctest::Approx(-kLog2));
  CHECK(parse_real("-log(3)") == doctest::Approx(-kLog3));
  CHECK(parse_real("13*log(3)") == doctest::Approx(13 * kLog3));
  CHECK_THROWS_AS(parse_real("log("), Error);
  CHECK_THROWS_AS(parse_real("1/0"), Error);
  CHECK_THROWS_AS(parse_real("abc"), Error);
}

TEST_CASE("bundled configs load") {
  const auto cantor = load_system("cantor13");
  CHECK(cantor.name == "cantor13");
  CHECK(cantor.ifs.has_value());
  CHECK(cantor.potential.weight(Word{1}) == doctest::Approx(-kLog3));
  CHECK(cantor.tail == TailPoint::periodic({0}));
  CHECK(cantor.target("all").is_all());
  CHECK(cantor.target("zero").words() == std::vector<Word>{{0}});
  CHECK_THROWS_AS(cantor.target("nope"), Error);

  const auto toy = load_system("toy_depth2");
  CHECK(toy.potential.depth() == 2);
  CHECK(toy.potential.weight(Word{1, 0}) == -3.0);

  // The overlapping offsets load only because the file opts in.
  const auto overlap = load_system("two_three_overlap");
  CHECK(overlap.allow_overlap);
  CHECK_FALSE(overlap.warnings.empty());
  const std::string overlapping = R"({"ifs": {"maps": [{"symbol": "0", "slope": "1/2", "offset": "1/20"},
                                                       {"symbol": "1", "slope": "1/3", "offset": "1/30"}]}})";
  CHECK_THROWS_AS(parse_config(overlapping), Error);
  CHECK(parse_config(overlapping, "x", true).warnings.size() == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), Error);
}

TEST_CASE("config diagnostics carry positions") {
  const auto syntax = config_error("{\n  \"name\": \"x\",\n  \"ifs\": [1,,]\n}\n");
  CHECK(syntax.find("test.cfg:3:") != std::string::npos);

  const auto both = config_error(R"({
  "ifs": {"maps": [{"symbol": "0", "slope": 0.5, "offset": 0}]},
  "explicit": {"symbols": ["0"], "incidence": [[1]], "potential": {"depth": 1, "weights": {"0": -1}}}
})");
  CHECK(both.find("test.cfg") != std::string::npos);

  const auto unknown = config_error(R"({
  "explicit": {"symbols": ["0", "1"], "incidence": [[1, 1], [1, 1]],
               "potential": {"depth": 1, "weights": {"0": -1, "2": -1}}}
})");
  CHECK(unknown.find("test.cfg:3:") != std::string::npos);
  CHECK(unknown.find("explicit.potential.weights.2") != std::string::npos);

  const auto bad_slope = config_error(R"({
  "ifs": {"maps": [{"symbol": "0", "slope": 1.5, "offset": 0},
                   {"symbol": "1", "slope": 0.2, "offset": 0.5}]}
})");
  CHECK(bad_slope.find("BadSlope") != std::string::npos);

  const auto tail = config_error(R"({
  "explicit": {"symbols": ["0", "1"], "incidence": [[1, 1], [1, 0]],
               "potential": {"depth": 1, "weights": {"0": -1, "1": -1}}},
  "tail": {"prefix": "", "cycle": "1"}
})");
  CHECK(tail.find("tail") != std::string::npos);

  const auto nested = config_error(R"({
  "ifs": {"maps": [{"symbol": "0", "slope": 0.3, "offset": 0},
                   {"symbol": "1", "slope": 0.3, "offset": 0.7}]},
  "targets": {"bad": ["0", "01"]}
})");
  CHECK(nested.find("targets.bad") != std::string::npos);
}

TEST_CASE("csv format") {
  const auto s = cantor_series(0.0, 3 * kLog3 + 0.1);
  const auto text = format_csv(s);
  CHECK(text.rfind("T,N_before,N_after,ratio_before,ratio_after\n", 0) == 0);
  CHECK(text.find("1.09861228866811,0,2,0,") != std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("csv round trip") {
  const auto s = cantor_series(2.0, 20 * kLog3);
  const auto text = format_csv(s);
  const auto back = parse_csv(text);
  REQUIRE(back.rows.size() == s.rows.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(back.rows[i].before == s.rows[i].before);
    CHECK(back.rows[i].after == s.rows[i].after);
    CHECK(back.rows[i].t == doctest::Approx(s.rows[i].t).epsilon(1e-14));
    CHECK(back.rows[i].ratio_after == doctest::Approx(s.rows[i].ratio_after).epsilon(1e-14));
  }
  CHECK(format_csv(back) == text);
  CHECK_THROWS_AS(parse_csv("T,N\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_csv("T,N_before,N_after,ratio_before,ratio_after\n1,x,2,3,4\n"), Error);
}

TEST_CASE("csv emission") {
  const auto dir = std::filesystem::temp_directory_path() / "thermoform_csv_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "series.csv").string();
  std::filesystem::remove(path);

  CountSeries empty;
  CHECK_THROWS_AS(emit_csv(empty, path), Error);
  CHECK_FALSE(std::filesystem::exists(path));

  const auto s = cantor_series(0.0, 5.0);
  emit_csv(s, path);
  std::ifstream in(path, std::ios::binary);
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == format_csv(s));
  std::filesystem::remove_all(dir);
}

TEST_CASE("report json") {
  const auto cantor = load_system("cantor13");
  const auto rep = asymptotic_report(cantor.subshift(), cantor.potential, cantor.tail, TargetSet::all(), 13 * kLog3,
                                     20 * kLog3);
  const auto doc = nlohmann::json::parse(report_json(cantor, "all", rep));
  CHECK(doc.dump().find("lower") != std::string::npos);
  CHECK(doc.dump().find("true") != std::string::npos);
  CHECK(report_json(cantor, "all", rep) == report_json(cantor, "all", rep));
}
