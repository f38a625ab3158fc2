#include <doctest.h>

#include <fstream>
#include <sstream>

#include "phasegeo/verify.hpp"

using namespace phasegeo;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE_MESSAGE(f.good(), "cannot open ", path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string source(const std::string& rel) { return std::string(PHASEGEO_SOURCE_DIR) + "/" + rel; }

RunConfig small(const std::string& metric, int n = 6) {
  RunConfig c;
  c.metric = metric;
  c.samples = n;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("config parsing: defaults, overrides and strict keys") {
  RunConfig d = parse_config(json::object());
  CHECK(d.metric == "minkowski");
  CHECK(d.samples == 50);
  CHECK(d.suites.size() == 4);

  json j = json::parse(R"({
    "metric": {"id": "schwarzschild", "params": {"rs": 2.0}},
    "constants": {"c": 3.0, "hbar": 0.5, "m_particle": 2.0},
    "sampling": {"count": 12, "seed": 9},
    "tolerances": {"algebraic": 1e-11, "derivative": 1e-8, "bracket": 1e-7},
    "suites": ["structures"],
    "expect": {"contact": true}
  })");
  RunConfig c = parse_config(j);
  CHECK(c.metric == "schwarzschild");
  CHECK(c.metric_params.at("rs") == 2.0);
  CHECK(c.constants.c == 3.0);
  CHECK(c.constants.m == 2.0);
  CHECK(c.samples == 12);
  CHECK(c.seed == 9);
  CHECK(c.tol.bracket == 1e-7);
  CHECK(c.suites == std::vector<std::string>{"structures"});
  CHECK(c.expect.at("contact"));

  CHECK(parse_config(config_json(c)).metric_params == c.metric_params);
  CHECK(config_hash(parse_config(config_json(c))) == config_hash(c));
  RunConfig c2 = c;
  c2.seed = 10;
  CHECK(config_hash(c2) != config_hash(c));

  CHECK_THROWS_AS(parse_config(json::parse(R"({"sampling": {"count": "many"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"metrc": {"id": "wavy"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"sampling": {"count": 0}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"suites": ["tangent"]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"constants": {"c": -1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"expect": {"symplectik": true}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"perturbation": {"kind": "sigma", "sigma": "chiral"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("unknown identifiers surface at run time") {
  RunConfig c = small("kerr");
  CHECK_THROWS_AS(run(c), UnknownId);
  RunConfig e = small("minkowski");
  e.perturbation.kind = "em";
  e.perturbation.field = "dipole";
  CHECK_THROWS_AS(run(e), UnknownId);
}

TEST_CASE("metric run passes every row and agrees with its expectations") {
  RunConfig c = small("schwarzschild");
  c.expect = {{"contact", true}, {"jacobi", true}, {"symplectic", true}};
  Report r = run(c);
  CHECK(r.pass);
  CHECK(exit_code(r) == kExitPass);
  REQUIRE(r.verdict);
  CHECK(r.verdict->contact);
  CHECK(r.verdict->coherent);
  REQUIRE(r.tangent);
  CHECK(r.tangent->poisson);
  CHECK(r.points.size() == 6);
  for (const auto& s : suite_catalog()) {
    REQUIRE(r.suites.count(s));
    CHECK_FALSE(r.suites.at(s).empty());
    for (const auto& [name, row] : r.suites.at(s)) {
      CHECK_MESSAGE(row.pass, s, ".", name);
      CHECK(row.worst_point >= 0);
    }
  }
  CHECK(r.suites.at("kinematics").size() > 20);
}

TEST_CASE("a wrong expectation fails the run with the verdict exit code") {
  RunConfig c = small("minkowski");
  c.expect = {{"contact", false}};
  Report r = run(c);
  CHECK_FALSE(r.pass);
  CHECK(exit_code(r) == kExitVerdict);
  CHECK(r.expectations.at("contact").actual);
  CHECK_FALSE(r.expectations.at("contact").expected);
}

TEST_CASE("expectations need their suites") {
  RunConfig c = small("minkowski");
  c.suites = {"kinematics"};
  c.expect = {{"contact", true}};
  CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("EM perturbation rows and flags") {
  RunConfig c = small("schwarzschild");
  c.perturbation.kind = "em";
  c.perturbation.field = "coulomb";
  c.perturbation.q = 0.2;
  c.suites = {"structures", "perturbations"};
  Report r = run(c);
  REQUIRE(r.verdict);
  CHECK(r.verdict->acc);
  CHECK_FALSE(r.verdict->contact);
  CHECK(r.verdict->coherent);
  CHECK(r.suites.at("perturbations").count("em_closedness"));
  CHECK(r.pass);
}

TEST_CASE("empty suite list gives an empty but valid report") {
  RunConfig c = small("wavy", 3);
  c.suites.clear();
  Report r = run(c);
  CHECK(r.suites.empty());
  CHECK_FALSE(r.verdict);
  CHECK_FALSE(r.tangent);
  CHECK(r.pass);
  json j = to_json(r);
  CHECK(j.at("verdict").is_null());
  CHECK(j.at("suites").empty());
  CHECK(report_from_json(j) == r);
}

TEST_CASE("no admissible points is a runtime error") {
  RunConfig c = small("schwarzschild");
  Box b;
  b.lo = {-1, 0.2, 1, 0};
  b.hi = {1, 0.5, 2, 1};
  c.box = b;
  CHECK_THROWS_AS(run(c), AdmissibilityError);
}

TEST_CASE("JSON round trip and byte-identical reruns") {
  RunConfig c = small("generic", 4);
  c.perturbation.kind = "sigma";
  c.perturbation.sigma = "mixed";
  Report a = run(c), b = run(c);
  std::string ja = emit_json(a), jb = emit_json(b);
  CHECK(ja == jb);
  Report back = report_from_json(json::parse(ja));
  CHECK(back == a);
  CHECK(emit_json(back) == ja);
  CHECK_THROWS_AS(report_from_json(json::parse(R"({"pass": true})")), ConfigError);
}

TEST_CASE("markdown lists every row with a statement and a mark") {
  RunConfig c = small("minkowski", 3);
  c.expect = {{"contact", true}};
  Report r = run(c);
  std::string md = emit_markdown(r);
  CHECK(md.find("# phasegeo report") != std::string::npos);
  CHECK(md.find("| contact | true | true | ✓ |") != std::string::npos);
  CHECK(md.find("✗") == std::string::npos);
  for (const auto& [suite, rows] : r.suites)
    for (const auto& [name, row] : rows) {
      std::string st = identity_statement(suite, name);
      CHECK_FALSE(st.empty());
      CHECK(md.find("| " + name + " | " + st + " |") != std::string::npos);
    }
}

TEST_CASE("golden report") {
  json cfg = json::parse(slurp(source("configs/golden.json")));
  std::string got = emit_json(run(parse_config(cfg)));
  std::string want = slurp(source("docs/report.golden.json"));
  CHECK(got == want);
}

TEST_CASE("shipped configurations parse") {
  for (const char* name : {"minkowski", "schwarzschild", "schwarzschild_em", "schwarzschild_coulomb", "wavy_psi",
                           "wavy_projective", "expect_wrong", "no_points", "golden"}) {
    json j = json::parse(slurp(source(std::string("configs/") + name + ".json")));
    CHECK_NOTHROW(parse_config(j));
  }
  json bad = json::parse(slurp(source("configs/malformed.json")));
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}
