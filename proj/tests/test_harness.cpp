#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confcov/harness.hpp"
#include "confcov/sampling.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <regex>
#include <set>

using namespace confcov;
using nlohmann::ordered_json;

namespace {

std::string strip_runtime(const std::string& s) {
  static const std::regex rt("\"runtime_ms\": [0-9.eE+-]+");
  return std::regex_replace(s, rt, "\"runtime_ms\": 0");
}

std::size_t count(const std::vector<CheckRecord>& rs, CheckStatus s) {
  std::size_t n = 0;
  for (const auto& r : rs) n += r.status == s;
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = parse_config(R"({"suites": "sphere", "dims": [3, 5], "grid": {"flat": 8}, "seed": 7,
                            "tolerances": {"dirichlet": 1e-9}, "family_size": 2, "out": "r.txt", "format": "text"})");
  CHECK(c.suites == std::vector<std::string>{"sphere"});
  REQUIRE(c.dims);
  CHECK(*c.dims == std::vector<int>{3, 5});
  CHECK(c.grid("flat") == 8);
  CHECK(c.grid("curved") == 24);
  CHECK(c.tolerance("dirichlet") == 1e-9);
  CHECK(c.tolerance("linearization") == 1e-7);
  CHECK(c.seed == 7);
  CHECK(c.family_size == 2);
  CHECK(c.out == "r.txt");
  CHECK(c.format == "text");

  auto g = parse_config(R"({"suites": ["rank", "sphere"], "grid": 20})");
  CHECK(g.suites.size() == 2);
  for (const auto& [key, _] : default_grids()) CHECK(g.grid(key) == 20);

  auto d = parse_config("{}");
  CHECK(d.suites == std::vector<std::string>{"all"});
  CHECK_FALSE(d.dims);
  CHECK(d.dims_or({4}) == std::vector<int>{4});
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"suites": "nope"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": "x"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"format": "xml"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"flat": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dims": [0]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"family_size": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tolerances": {"unknown": 1}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.json"), ConfigError);
  // every override must respect its floor
  for (const auto& t : default_tolerances()) {
    SuiteConfig c;
    c.tolerances[t.key] = t.floor / 10;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.tolerances[t.key] = t.floor;
    CHECK_NOTHROW(c.validate());
    CHECK(t.value >= t.floor);
  }
}

TEST_CASE("unknown suite") {
  CHECK_THROWS_AS(run_suite("nope", SuiteConfig{}), ConfigError);
  CHECK(suite_names().back() == "all");
  CHECK(suite_names().size() == 11);
}

TEST_CASE("sphere suite gives five passes") {
  auto rs = run_suite("sphere", SuiteConfig{});
  CHECK(rs.size() == 5);
  CHECK(count(rs, CheckStatus::Pass) == 5);
  for (const auto& r : rs) {
    CHECK(r.suite == "sphere");
    REQUIRE(r.residual);
    CHECK(r.residual->exact);
    CHECK(r.residual->identically_zero);
  }
  CHECK_FALSE(any_failure(rs));
}

TEST_CASE("negative controls all fail as expected") {
  auto rs = run_suite("negative-controls", SuiteConfig{});
  CHECK(rs.size() >= 10);
  CHECK(count(rs, CheckStatus::Pass) == rs.size());
  auto j = ordered_json::parse(render_report(rs, "json"));
  for (const auto& o : j) CHECK(o["params"]["expected"] == "fail");
}

TEST_CASE("empty dimension list gives skips") {
  SuiteConfig c;
  c.dims = std::vector<int>{};
  for (const char* s : {"algebra", "covariance", "flat-operators"}) {
    auto rs = run_suite(s, c);
    CHECK_FALSE(rs.empty());
    CHECK_FALSE(any_failure(rs));
    CHECK(count(rs, CheckStatus::Skip) > 0);
    for (const auto& r : rs)
      if (r.status == CheckStatus::Skip) CHECK_FALSE(r.residual);
  }
}

TEST_CASE("json schema and field order") {
  CheckRecord pass{"s", "c1", "a", CheckStatus::Pass, Residual::exact_result(true), 1.5, {{"n", "5"}}};
  CheckRecord fail{"s", "c2", "a", CheckStatus::Fail, Residual::numeric(0.25), 0.0, {}};
  CheckRecord sk{"s", "c3", "a", CheckStatus::Skip, std::nullopt, 0.0, {}};
  auto one = ordered_json::parse(render_report({pass}, "json"));
  REQUIRE(one.size() == 1);
  std::vector<std::string> keys;
  for (auto it = one[0].begin(); it != one[0].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"suite", "check", "anchor", "status", "residual", "runtime_ms", "params"});
  CHECK(one[0]["status"] == "pass");
  CHECK(one[0]["residual"]["identically_zero"] == true);
  CHECK(one[0]["params"]["n"] == 5);

  auto mixed = ordered_json::parse(render_report({fail, pass, sk}, "json"));
  CHECK(mixed[0]["check"] == "c2");
  CHECK(mixed[0]["status"] == "fail");
  CHECK(mixed[0]["residual"] == 0.25);
  CHECK(mixed[1]["check"] == "c1");
  CHECK(mixed[2]["status"] == "skip");
  CHECK(mixed[2]["residual"].is_null());

  auto text = render_report({fail, pass, sk}, "text");
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(text.rfind("fail", 0) == 0);
  CHECK_THROWS_AS(render_report({pass}, "xml"), ConfigError);
}

TEST_CASE("report files") {
  CheckRecord pass{"s", "c1", "a", CheckStatus::Pass, Residual::exact_result(true), 1.0, {}};
  CHECK_THROWS_AS(emit_report({pass}, "json", "/nonexistent/dir/report.json"), ReportIoError);
  CHECK_THROWS_AS(emit_report({}, "json", "unused.json"), ConfigError);
  std::string path = "test_harness_report.json";
  emit_report({pass}, "json", path);
  std::ifstream in(path);
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(body == render_report({pass}, "json"));
  std::remove(path.c_str());
}

TEST_CASE("same seed gives identical json modulo runtime") {
  SuiteConfig c;
  c.suites = {"algebra", "covariance", "variation"};
  c.dims = std::vector<int>{3, 5};
  c.family_size = 2;
  auto a = strip_runtime(render_report(run_config(c), "json"));
  auto b = strip_runtime(render_report(run_config(c), "json"));
  CHECK(a == b);
  c.seed += 1;
  auto other = run_config(c);
  CHECK_FALSE(any_failure(other));
}

TEST_CASE("sampler streams depend on seed and salt only") {
  Sampler a(5, "x"), b(5, "x"), c(5, "y"), d(6, "x");
  std::vector<int> va, vb, vc, vd;
  for (int i = 0; i < 20; ++i) {
    va.push_back(a.uniform_int(0, 1000));
    vb.push_back(b.uniform_int(0, 1000));
    vc.push_back(c.uniform_int(0, 1000));
    vd.push_back(d.uniform_int(0, 1000));
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  Sampler p(9);
  for (int i = 0; i < 30; ++i) {
    int deg = p.uniform_int(1, 4);
    CHECK(p.poly(3, deg, 4).total_degree() == deg);
  }
}

TEST_CASE("flat and coefficient suites pass with defaults") {
  for (const char* s : {"coefficients", "sphere", "rank"}) {
    auto rs = run_suite(s, SuiteConfig{});
    CHECK_FALSE(any_failure(rs));
    CHECK(count(rs, CheckStatus::Pass) > 0);
  }
}
