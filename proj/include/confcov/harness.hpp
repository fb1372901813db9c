#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace confcov {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReportIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CheckStatus { Pass, Fail, Skip };
const char* status_name(CheckStatus s);

// Exact checks carry only the "identically zero" flag; numeric ones a float.
struct Residual {
  bool exact = true;
  bool identically_zero = false;
  double value = 0.0;

  static Residual exact_result(bool zero) { return {true, zero, 0.0}; }
  static Residual numeric(double v) { return {false, false, v}; }
};

struct CheckRecord {
  std::string suite;
  std::string check;
  std::string anchor;
  CheckStatus status = CheckStatus::Skip;
  std::optional<Residual> residual;  // empty for skips
  double runtime_ms = 0.0;
  // Values are JSON literals, kept in insertion order.
  std::vector<std::pair<std::string, std::string>> params;
};

struct ToleranceSpec {
  std::string key;
  double value;
  double floor;
};
const std::vector<ToleranceSpec>& default_tolerances();
// Grid resolutions: flat, curved, variation, primitive, primitive3d.
const std::map<std::string, int>& default_grids();

struct SuiteConfig {
  std::vector<std::string> suites{"all"};
  std::optional<std::vector<int>> dims;  // empty optional: per-check defaults
  std::map<std::string, int> grids;      // overrides of default_grids()
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240611;
  int family_size = 10;  // random conformal factors per dimension
  std::string out;
  std::string format = "json";

  double tolerance(const std::string& key) const;
  int grid(const std::string& key) const;
  // dims if given, else the fallback.
  std::vector<int> dims_or(std::vector<int> fallback) const;
  void validate() const;  // throws ConfigError
};

// JSON keys: suites (string or list), dims, grid (int or object), tolerances,
// seed, family_size, out, format.
SuiteConfig parse_config(const std::string& json_text);
SuiteConfig load_config(const std::string& path);

// Suite names in declaration order, "all" last.
const std::vector<std::string>& suite_names();

// Throws ConfigError for unknown suites or invalid configs.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteConfig& cfg);
std::vector<CheckRecord> run_config(const SuiteConfig& cfg);

bool any_failure(const std::vector<CheckRecord>& records);

std::string render_report(const std::vector<CheckRecord>& records, const std::string& format);
// Throws ReportIoError when the path cannot be written.
void emit_report(const std::vector<CheckRecord>& records, const std::string& format, const std::string& path);

// Check groups behind the suites.
namespace checks {
std::vector<CheckRecord> esp_props(const SuiteConfig& cfg);
std::vector<CheckRecord> cvi_relations(const SuiteConfig& cfg);
std::vector<CheckRecord> or_coefficients(const SuiteConfig& cfg);
std::vector<CheckRecord> b_recursion(const SuiteConfig& cfg);
std::vector<CheckRecord> flat_operators(const SuiteConfig& cfg);
std::vector<CheckRecord> power_normalization(const SuiteConfig& cfg);
std::vector<CheckRecord> recovery(const SuiteConfig& cfg);
std::vector<CheckRecord> covariance(const SuiteConfig& cfg);
std::vector<CheckRecord> selfadjoint_flat(const SuiteConfig& cfg);
std::vector<CheckRecord> selfadjoint_curved(const SuiteConfig& cfg);
std::vector<CheckRecord> dirichlet_energy(const SuiteConfig& cfg);
std::vector<CheckRecord> jets(const SuiteConfig& cfg);
std::vector<CheckRecord> linearization(const SuiteConfig& cfg);
std::vector<CheckRecord> rank(const SuiteConfig& cfg);
std::vector<CheckRecord> primitive(const SuiteConfig& cfg);
std::vector<CheckRecord> sphere(const SuiteConfig& cfg);
std::vector<CheckRecord> negative_controls(const SuiteConfig& cfg);
}  // namespace checks

}  // namespace confcov
