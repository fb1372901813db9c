#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confcov/confcov.h"

#include <cstdio>
#include <cstring>
#include <string>

TEST_CASE("version and null arguments") {
  CHECK(std::string(confcov_version()) == "1.0.0");
  CHECK(confcov_config_new(nullptr) == CONFCOV_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(confcov_last_error()) > 0);
  confcov_report* r = nullptr;
  CHECK(confcov_run(nullptr, &r) == CONFCOV_ERR_INVALID_ARGUMENT);
  CHECK(confcov_report_count(nullptr) == 0);
  confcov_config_free(nullptr);
  confcov_report_free(nullptr);
}

TEST_CASE("config errors map to status codes") {
  confcov_config* cfg = nullptr;
  CHECK(confcov_config_parse("{\"suites\": \"nope\"}", &cfg) == CONFCOV_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(confcov_last_error()).find("nope") != std::string::npos);
  CHECK(confcov_config_load("/nonexistent/cfg.json", &cfg) == CONFCOV_ERR_CONFIG);

  REQUIRE(confcov_config_new(&cfg) == CONFCOV_OK);
  const char* bad[] = {"sphere", "bogus"};
  CHECK(confcov_config_set_suites(cfg, bad, 2) == CONFCOV_ERR_CONFIG);
  CHECK(confcov_config_set_tolerance(cfg, "dirichlet", 1e-20) == CONFCOV_ERR_CONFIG);
  CHECK(confcov_config_set_tolerance(cfg, "dirichlet", 1e-9) == CONFCOV_OK);
  CHECK(confcov_config_set_grid(cfg, "flat", 2) == CONFCOV_ERR_CONFIG);
  CHECK(confcov_config_set_grid(cfg, nullptr, 12) == CONFCOV_OK);
  CHECK(confcov_config_set_family_size(cfg, 0) == CONFCOV_ERR_CONFIG);
  CHECK(confcov_config_set_output(cfg, "out.txt", "xml") == CONFCOV_ERR_CONFIG);
  CHECK(confcov_config_set_output(cfg, "out.txt", "text") == CONFCOV_OK);
  const char* path = nullptr;
  const char* fmt = nullptr;
  CHECK(confcov_config_get_output(cfg, &path, &fmt) == CONFCOV_OK);
  CHECK(std::string(path) == "out.txt");
  CHECK(std::string(fmt) == "text");
  confcov_config_free(cfg);
}

TEST_CASE("run the sphere suite through handles") {
  confcov_config* cfg = nullptr;
  REQUIRE(confcov_config_new(&cfg) == CONFCOV_OK);
  const char* suites[] = {"sphere"};
  REQUIRE(confcov_config_set_suites(cfg, suites, 1) == CONFCOV_OK);
  confcov_report* rep = nullptr;
  REQUIRE(confcov_run(cfg, &rep) == CONFCOV_OK);
  CHECK(confcov_report_count(rep) == 5);
  CHECK(confcov_report_failures(rep) == 0);
  confcov_record_view v;
  REQUIRE(confcov_report_record(rep, 0, &v) == CONFCOV_OK);
  CHECK(std::string(v.suite) == "sphere");
  CHECK(v.status == CONFCOV_CHECK_PASS);
  CHECK(v.has_residual == 1);
  CHECK(v.exact == 1);
  CHECK(v.identically_zero == 1);
  CHECK(std::string(v.params_json).find("\"k\"") != std::string::npos);
  CHECK(confcov_report_record(rep, 5, &v) == CONFCOV_ERR_INVALID_ARGUMENT);

  char* text = nullptr;
  REQUIRE(confcov_report_render(rep, "text", &text) == CONFCOV_OK);
  CHECK(std::string(text).find("pass") == 0);
  confcov_string_free(text);
  CHECK(confcov_report_render(rep, "xml", &text) == CONFCOV_ERR_CONFIG);
  CHECK(confcov_report_write(rep, "/nonexistent/dir/r.json", "json") == CONFCOV_ERR_IO);
  CHECK(confcov_report_write(rep, "test_capi_report.json", "json") == CONFCOV_OK);
  std::remove("test_capi_report.json");
  confcov_report_free(rep);

  REQUIRE(confcov_config_set_dims(cfg, nullptr, 0) == CONFCOV_OK);
  const char* alg[] = {"algebra"};
  REQUIRE(confcov_config_set_suites(cfg, alg, 1) == CONFCOV_OK);
  REQUIRE(confcov_run(cfg, &rep) == CONFCOV_OK);
  CHECK(confcov_report_failures(rep) == 0);
  REQUIRE(confcov_report_record(rep, 0, &v) == CONFCOV_OK);
  CHECK(v.status == CONFCOV_CHECK_SKIP);
  CHECK(v.has_residual == 0);
  confcov_report_free(rep);
  confcov_config_free(cfg);
}

TEST_CASE("coefficient tables") {
  char* out = nullptr;
  REQUIRE(confcov_b_coefficients("7", 2, &out) == CONFCOV_OK);
  std::string s(out);
  confcov_string_free(out);
  CHECK(s.find("b_1 = 1") != std::string::npos);
  CHECK(s.find("b_2 = 2") != std::string::npos);
  REQUIRE(confcov_or_coefficients("13/3", 2, &out) == CONFCOV_OK);
  s = out;
  confcov_string_free(out);
  CHECK(s.find("symmetric: yes") != std::string::npos);
  CHECK(s.find("tangency recurrence: holds") != std::string::npos);
  CHECK(confcov_b_coefficients("abc", 2, &out) == CONFCOV_ERR_DOMAIN);
}

TEST_CASE("sphere and rank entry points") {
  int ok = 0, deg = 0;
  for (int k = 1; k <= 5; ++k) {
    REQUIRE(confcov_sphere_check(k, &ok, &deg) == CONFCOV_OK);
    CHECK(ok == 1);
    CHECK(deg == 2 * k - 1);
  }
  confcov_rank_result r;
  char* w = nullptr;
  REQUIRE(confcov_rank("sigma2", 4, &r, &w) == CONFCOV_OK);
  CHECK(r.rank == 4);
  CHECK(r.family_size == 59049);
  CHECK(w != nullptr);
  confcov_string_free(w);
  CHECK(confcov_rank("nonsense", 4, &r, nullptr) != CONFCOV_OK);
}
