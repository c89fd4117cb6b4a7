#include "support.hpp"

#include "volterra/acceptance.hpp"
#include "volterra/gallery.hpp"
#include "volterra/report.hpp"
#include "volterra/scenario.hpp"
#include "volterra/solver.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace volterra;
using namespace test;

namespace {

const char* kDemo = R"({
  "name": "demo",
  "dim": 1,
  "A": [[[0.5, 0.0]]],
  "kernel": {"type": "geometric-sum", "terms": [{"coefficient": [[[0.25, 0.0]]], "ratio": [0.5, 0.0]}]},
  "N": 12
})";

SchemaError schema_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const SchemaError& e) {
    return e;
  }
  FAIL("no schema error for: " << text);
  return SchemaError("", "");
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("demo scenario parses with defaults") {
  const Scenario s = parse_scenario(kDemo);
  CHECK(s.name == "demo");
  CHECK(s.horizon == 12);
  CHECK(s.forcing.is_zero());
  CHECK(s.x0.size() == 1);
  CHECK(s.x0(0) == cplx(1.0));
}

TEST_CASE("gallery scenarios round-trip through JSON") {
  REQUIRE(gallery().size() == 10);
  for (const auto& g : gallery())
    for (const Forcing& f : {g.decaying, g.harmonic, unit_constant_forcing(g.system.dim())}) {
      Scenario s = gallery_scenario(g, f, 321);
      s.tolerances = {{"grid", 512.0}, {"abel_tol", 0.02}};
      s.outputs = {{"csv", "x.csv"}};
      const Scenario back = parse_scenario(dump_scenario(s));
      CHECK(back == s);
      CHECK(dump_scenario(back) == dump_scenario(s));
    }
}

TEST_CASE("random tabulated scenarios round-trip exactly") {
  Rng rng(61);
  for (int t = 0; t < 10; ++t) {
    const Index d = 1 + t % 3;
    std::vector<Vector> values;
    for (int k = 0; k < 5; ++k) values.push_back(random_vector(rng, d));
    const Scenario s{"random", random_system(rng, d, t % 3, 0.9), Forcing(TabulatedForcing{d, values}),
                     random_vector(rng, d), 17, {}, {}};
    CHECK(parse_scenario(dump_scenario(s)) == s);
  }
}

TEST_CASE("shipped scenario files load") {
  const std::filesystem::path dir = std::filesystem::path(VOLTERRA_SOURCE_DIR) / "scenarios";
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.path().extension() == ".json") {
      const Scenario s = load_scenario(entry.path());
      CHECK(parse_scenario(dump_scenario(s)) == s);
      ++count;
    }
  CHECK(count >= 4);
}

TEST_CASE("schema errors name the field and line") {
  const auto unknown = schema_error(replaced(kDemo, "\"N\"", "\"steps\""));
  CHECK(unknown.field() == "steps");
  CHECK(unknown.line() == 6);

  const auto ratio = schema_error(replaced(kDemo, "\"ratio\": [0.5, 0.0]", "\"ratio\": [1.5, 0.0]"));
  CHECK(ratio.field() == "kernel.terms[0].ratio");
  CHECK(ratio.line() == 5);

  const auto syntax = schema_error(replaced(kDemo, "\"dim\": 1,", "\"dim\": 1"));
  CHECK(syntax.line() == 4);

  CHECK(schema_error(replaced(kDemo, "\"dim\": 1", "\"dim\": 2")).field() == "A");
  CHECK(schema_error(replaced(kDemo, "geometric-sum", "spline")).field() == "kernel.type");
  CHECK(schema_error(replaced(kDemo, "\"N\": 12", "\"N\": 12, \"tolerances\": {\"grid\": 1.5}")).field() ==
        "tolerances.grid");
  CHECK(schema_error(replaced(kDemo, "\"N\": 12", "\"N\": 12, \"tolerances\": {\"abel_tol\": -1}")).field() ==
        "tolerances.abel_tol");
  CHECK(schema_error(replaced(kDemo, "\"N\": 12", "\"N\": 12, \"tolerances\": {\"bogus\": 1}")).field() ==
        "tolerances.bogus");
  CHECK(schema_error(replaced(kDemo, "\"N\": 12", "\"N\": -3")).field() == "N");
}

TEST_CASE("tolerance overrides reach the option structs") {
  const std::map<std::string, double> tol = {{"grid", 512.0}, {"singular_tol", 1e-6}, {"window_start", 50.0},
                                             {"frequency_threshold", 0.05}, {"c0_tol", 1e-4}};
  CHECK(spectral_tolerances(tol).grid == 512);
  CHECK(spectral_tolerances(tol).singular_tol == 1e-6);
  CHECK(spectrum_options(tol).window_start == 50);
  CHECK(spectrum_options(tol).grid == 512);
  CHECK(frequency_options(tol).threshold == 0.05);
  CHECK(c0_tolerance(tol) == 1e-4);
  CHECK(classify_options(tol, 999).horizon == 999);
}

TEST_CASE("CSV round trip is exact") {
  Rng rng(62);
  const auto x = random_sequence(rng, 3, 50);
  std::stringstream s;
  write_sequence_csv(s, x);
  const auto back = read_sequence_csv(s);
  REQUIRE(back.size() == x.size());
  const auto a = x.data(), b = back.data();
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
}

TEST_CASE("CSV of the demo trajectory") {
  const Scenario s = parse_scenario(kDemo);
  std::stringstream out;
  write_sequence_csv(out, solve(s.system, s.forcing, s.x0, 3));
  std::string header, row0, row1, row2;
  std::getline(out, header);
  std::getline(out, row0);
  std::getline(out, row1);
  std::getline(out, row2);
  CHECK(header == "n,re_0,im_0");
  CHECK(row0 == "0,1,0");
  CHECK(row2 == "2,0.6875,0");
}

TEST_CASE("malformed CSV reports its line") {
  std::stringstream s("n,re_0,im_0\n0,1,0\n1,abc,0\n");
  try {
    read_sequence_csv(s);
    FAIL("no error");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("reports are deterministic") {
  const auto a = to_json(run_acceptance("empty-sigma", 7)).dump();
  const auto b = to_json(run_acceptance("3", 7)).dump();
  CHECK(a.find("\"selector\":\"empty-sigma\"") != std::string::npos);
  CHECK(to_json(run_acceptance("empty-sigma", 7)).dump() == a);
  CHECK(b.find("\"passed\":true") != std::string::npos);
  CHECK(is_acceptance_selector("all"));
  CHECK(is_acceptance_selector("shift-bound"));
  CHECK_FALSE(is_acceptance_selector("11"));
  CHECK_THROWS_AS(run_acceptance("nope"), std::invalid_argument);
}

TEST_CASE("ztransform acceptance criterion is seed-stable") {
  const auto one = to_json(run_acceptance("ztransform", 99)).dump();
  CHECK(to_json(run_acceptance("ztransform", 99)).dump() == one);
}
