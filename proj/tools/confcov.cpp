// Command-line front end over the C API.
#include "confcov/confcov.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitUsage = 2;

int report_error(confcov_status s, const char* what) {
  std::cerr << "error: " << what << ": " << confcov_last_error() << "\n";
  return s == CONFCOV_ERR_CONFIG || s == CONFCOV_ERR_INVALID_ARGUMENT || s == CONFCOV_ERR_DOMAIN ? kExitUsage
                                                                                                  : kExitFail;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad dimension: " + item);
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct VerifyArgs {
  std::string suite, config, dims, out, format;
  int grid = 0, family_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> tolerances;
  bool dims_set = false, seed_set = false;
};

int run_verify(VerifyArgs& a) {
  confcov_config* cfg = nullptr;
  confcov_status s = a.config.empty() ? confcov_config_new(&cfg) : confcov_config_load(a.config.c_str(), &cfg);
  if (s != CONFCOV_OK) return report_error(s, "config");
  auto done = [&](int code) {
    confcov_config_free(cfg);
    return code;
  };
  if (!a.suite.empty()) {
    auto names = split(a.suite);
    std::vector<const char*> ptrs;
    for (const auto& n : names) ptrs.push_back(n.c_str());
    if ((s = confcov_config_set_suites(cfg, ptrs.data(), ptrs.size())) != CONFCOV_OK)
      return done(report_error(s, "--suite"));
  }
  if (a.dims_set) {
    std::vector<int> dims;
    try {
      dims = parse_dims(a.dims);
    } catch (const std::exception& e) {
      std::cerr << "error: --dims: " << e.what() << "\n";
      return done(kExitUsage);
    }
    if ((s = confcov_config_set_dims(cfg, dims.data(), dims.size())) != CONFCOV_OK)
      return done(report_error(s, "--dims"));
  }
  if (a.grid && (s = confcov_config_set_grid(cfg, nullptr, a.grid)) != CONFCOV_OK) return done(report_error(s, "--grid"));
  if (a.seed_set) confcov_config_set_seed(cfg, a.seed);
  if (a.family_size && (s = confcov_config_set_family_size(cfg, a.family_size)) != CONFCOV_OK)
    return done(report_error(s, "--family-size"));
  for (const auto& t : a.tolerances) {
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --tolerance expects key=value\n";
      return done(kExitUsage);
    }
    double v = 0;
    try {
      v = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      std::cerr << "error: --tolerance value is not a number\n";
      return done(kExitUsage);
    }
    if ((s = confcov_config_set_tolerance(cfg, t.substr(0, eq).c_str(), v)) != CONFCOV_OK)
      return done(report_error(s, "--tolerance"));
  }
  if ((s = confcov_config_set_output(cfg, a.out.empty() ? nullptr : a.out.c_str(),
                                     a.format.empty() ? nullptr : a.format.c_str())) != CONFCOV_OK)
    return done(report_error(s, "--out/--format"));

  confcov_report* report = nullptr;
  if ((s = confcov_run(cfg, &report)) != CONFCOV_OK) return done(report_error(s, "verify"));
  const char *out_path = nullptr, *format = nullptr;
  confcov_config_get_output(cfg, &out_path, &format);
  int code = kExitOk;
  if (out_path && *out_path) {
    if ((s = confcov_report_write(report, out_path, format)) != CONFCOV_OK) code = report_error(s, "report");
  } else {
    char* text = nullptr;
    if ((s = confcov_report_render(report, format, &text)) != CONFCOV_OK) {
      code = report_error(s, "report");
    } else {
      std::fputs(text, stdout);
      confcov_string_free(text);
    }
  }
  std::size_t total = confcov_report_count(report), fails = confcov_report_failures(report), skips = 0;
  for (std::size_t i = 0; i < total; ++i) {
    confcov_record_view v;
    confcov_report_record(report, i, &v);
    skips += v.status == CONFCOV_CHECK_SKIP;
  }
  std::cerr << total << " checks: " << total - fails - skips << " pass, " << fails << " fail, " << skips << " skip\n";
  if (code == kExitOk && fails > 0) code = kExitFail;
  confcov_report_free(report);
  return done(code);
}

int run_coeffs(const std::string& what, int k, const std::string& n) {
  char* text = nullptr;
  confcov_status s = what == "b" ? confcov_b_coefficients(n.c_str(), k, &text) : confcov_or_coefficients(n.c_str(), k, &text);
  if (s != CONFCOV_OK) return report_error(s, "coeffs");
  std::fputs(text, stdout);
  confcov_string_free(text);
  return kExitOk;
}

int run_rank(const std::string& invariant, int dim) {
  confcov_rank_result r;
  char* witness = nullptr;
  confcov_status s = confcov_rank(invariant.c_str(), dim, &r, &witness);
  if (s != CONFCOV_OK) return report_error(s, "rank");
  std::cout << "invariant " << invariant << ", dimension " << dim << "\n";
  std::cout << "family: degree <= 2 in 3 variables, coefficients in {-1,0,1} (" << r.family_size << " members, "
            << r.samples << " representatives)\n";
  std::cout << "certified zero coefficients: c_j for j in {";
  for (std::size_t i = 0; i < r.certified_zero_count; ++i) std::cout << (i ? ", " : "") << r.certified_zero_degrees[i];
  std::cout << "}\n";
  std::cout << "witness degree: " << r.witness_degree << "\n";
  std::cout << "witness factor: " << (witness ? witness : "") << "\n";
  std::cout << "rank: " << r.rank << "\n";
  confcov_string_free(witness);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and spectral verification of conformally variational invariants"};
  app.require_subcommand(1);
  app.set_version_flag("--version", confcov_version());

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", va.suite, "suite name(s), comma separated (algebra, coefficients, flat-operators, "
                                          "covariance, self-adjointness, variation, rank, primitive, sphere, "
                                          "negative-controls, all)");
  verify->add_option("--config", va.config, "JSON config file; flags override it");
  auto* dims_opt = verify->add_option("--dims", va.dims, "dimension list, e.g. 3,5,6,7 (empty string: none)");
  verify->add_option("--grid", va.grid, "grid resolution for every torus check")->check(CLI::Range(4, 256));
  auto* seed_opt = verify->add_option("--seed", va.seed, "RNG seed");
  verify->add_option("--family-size", va.family_size, "random conformal factors per dimension");
  verify->add_option("--tolerance", va.tolerances, "key=value tolerance override (repeatable)");
  verify->add_option("--out", va.out, "report path (default: stdout)");
  verify->add_option("--format", va.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string what = "b", n = "5";
  int k = 2;
  auto* coeffs = app.add_subcommand("coeffs", "print exact coefficient tables");
  coeffs->add_option("--what", what, "b or or")->check(CLI::IsMember({"b", "or"}))->required();
  coeffs->add_option("--k", k, "order parameter k")->required()->check(CLI::Range(1, 12));
  coeffs->add_option("--n", n, "dimension (integer or rational)")->required();

  std::string invariant;
  int dim = 0;
  auto* rank = app.add_subcommand("rank", "certify the rank of an invariant in its critical dimension");
  rank->add_option("--invariant", invariant, "invariant name (sigma2, sigma3, v3, I1, I2, Q4, ...)")->required();
  rank->add_option("--dim", dim, "critical dimension 2k")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  va.dims_set = dims_opt->count() > 0;
  va.seed_set = seed_opt->count() > 0;

  if (verify->parsed()) return run_verify(va);
  if (coeffs->parsed()) return run_coeffs(what, k, n);
  if (rank->parsed()) return run_rank(invariant, dim);
  return kExitUsage;
}
