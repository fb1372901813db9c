#include "confcov/confcov.h"

#include "confcov/conformal_variation.hpp"
#include "confcov/harness.hpp"
#include "confcov/sphere_witness.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

struct confcov_config {
  confcov::SuiteConfig cfg;
};

struct confcov_report {
  std::vector<confcov::CheckRecord> records;
  std::vector<std::string> params;  // rendered per record
};

namespace {

thread_local std::string last_error;

confcov_status fail(confcov_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
confcov_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const confcov::ConfigError& e) {
    return fail(CONFCOV_ERR_CONFIG, e.what());
  } catch (const confcov::ReportIoError& e) {
    return fail(CONFCOV_ERR_IO, e.what());
  } catch (const confcov::DomainError& e) {
    return fail(CONFCOV_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CONFCOV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CONFCOV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CONFCOV_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

confcov::Rational parse_rational(const char* text) {
  if (!text) throw confcov::DomainError("missing rational");
  confcov::Rational q;
  if (q.set_str(text, 10) != 0) throw confcov::DomainError(std::string("not a rational: ") + text);
  q.canonicalize();
  return q;
}

#define REQUIRE_ARG(p) \
  if (!(p)) return fail(CONFCOV_ERR_INVALID_ARGUMENT, #p " is null")

}  // namespace

extern "C" {

const char* confcov_version(void) { return "1.0.0"; }

const char* confcov_last_error(void) { return last_error.c_str(); }

void confcov_string_free(char* s) { std::free(s); }

confcov_status confcov_config_new(confcov_config** out) {
  REQUIRE_ARG(out);
  return guarded([&] {
    *out = new confcov_config{};
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_load(const char* path, confcov_config** out) {
  REQUIRE_ARG(path);
  REQUIRE_ARG(out);
  return guarded([&] {
    auto cfg = confcov::load_config(path);
    *out = new confcov_config{std::move(cfg)};
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_parse(const char* json_text, confcov_config** out) {
  REQUIRE_ARG(json_text);
  REQUIRE_ARG(out);
  return guarded([&] {
    auto cfg = confcov::parse_config(json_text);
    *out = new confcov_config{std::move(cfg)};
    return CONFCOV_OK;
  });
}

void confcov_config_free(confcov_config* cfg) { delete cfg; }

confcov_status confcov_config_set_suites(confcov_config* cfg, const char* const* names, size_t count) {
  REQUIRE_ARG(cfg);
  if (count > 0 && !names) return fail(CONFCOV_ERR_INVALID_ARGUMENT, "names is null");
  return guarded([&] {
    std::vector<std::string> s;
    for (size_t i = 0; i < count; ++i) {
      if (!names[i]) return fail(CONFCOV_ERR_INVALID_ARGUMENT, "suite name is null");
      s.emplace_back(names[i]);
    }
    auto next = cfg->cfg;
    next.suites = s;
    next.validate();
    cfg->cfg = std::move(next);
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_set_seed(confcov_config* cfg, uint64_t seed) {
  REQUIRE_ARG(cfg);
  cfg->cfg.seed = seed;
  return CONFCOV_OK;
}

confcov_status confcov_config_set_dims(confcov_config* cfg, const int* dims, size_t count) {
  REQUIRE_ARG(cfg);
  if (count > 0 && !dims) return fail(CONFCOV_ERR_INVALID_ARGUMENT, "dims is null");
  return guarded([&] {
    auto next = cfg->cfg;
    next.dims = std::vector<int>(dims, dims + count);
    next.validate();
    cfg->cfg = std::move(next);
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_set_grid(confcov_config* cfg, const char* key, int resolution) {
  REQUIRE_ARG(cfg);
  return guarded([&] {
    auto next = cfg->cfg;
    if (key) next.grids[key] = resolution;
    else
      for (const auto& [g, _] : confcov::default_grids()) next.grids[g] = resolution;
    next.validate();
    cfg->cfg = std::move(next);
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_set_tolerance(confcov_config* cfg, const char* key, double value) {
  REQUIRE_ARG(cfg);
  REQUIRE_ARG(key);
  return guarded([&] {
    auto next = cfg->cfg;
    next.tolerances[key] = value;
    next.validate();
    cfg->cfg = std::move(next);
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_set_family_size(confcov_config* cfg, int size) {
  REQUIRE_ARG(cfg);
  return guarded([&] {
    auto next = cfg->cfg;
    next.family_size = size;
    next.validate();
    cfg->cfg = std::move(next);
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_set_output(confcov_config* cfg, const char* path, const char* format) {
  REQUIRE_ARG(cfg);
  return guarded([&] {
    auto next = cfg->cfg;
    if (path) next.out = path;
    if (format) next.format = format;
    next.validate();
    cfg->cfg = std::move(next);
    return CONFCOV_OK;
  });
}

confcov_status confcov_config_get_output(const confcov_config* cfg, const char** path, const char** format) {
  REQUIRE_ARG(cfg);
  if (path) *path = cfg->cfg.out.c_str();
  if (format) *format = cfg->cfg.format.c_str();
  return CONFCOV_OK;
}

confcov_status confcov_run(const confcov_config* cfg, confcov_report** out) {
  REQUIRE_ARG(cfg);
  REQUIRE_ARG(out);
  return guarded([&] {
    auto report = std::make_unique<confcov_report>();
    report->records = confcov::run_config(cfg->cfg);
    for (const auto& r : report->records) {
      nlohmann::ordered_json p = nlohmann::ordered_json::object();
      for (const auto& [k, v] : r.params) p[k] = nlohmann::ordered_json::parse(v);
      report->params.push_back(p.dump());
    }
    *out = report.release();
    return CONFCOV_OK;
  });
}

void confcov_report_free(confcov_report* report) { delete report; }

size_t confcov_report_count(const confcov_report* report) { return report ? report->records.size() : 0; }

size_t confcov_report_failures(const confcov_report* report) {
  if (!report) return 0;
  size_t n = 0;
  for (const auto& r : report->records) n += r.status == confcov::CheckStatus::Fail;
  return n;
}

confcov_status confcov_report_record(const confcov_report* report, size_t index, confcov_record_view* out) {
  REQUIRE_ARG(report);
  REQUIRE_ARG(out);
  if (index >= report->records.size()) return fail(CONFCOV_ERR_INVALID_ARGUMENT, "record index out of range");
  const auto& r = report->records[index];
  out->suite = r.suite.c_str();
  out->check = r.check.c_str();
  out->anchor = r.anchor.c_str();
  out->status = r.status == confcov::CheckStatus::Pass   ? CONFCOV_CHECK_PASS
                : r.status == confcov::CheckStatus::Fail ? CONFCOV_CHECK_FAIL
                                                         : CONFCOV_CHECK_SKIP;
  out->has_residual = r.residual.has_value();
  out->exact = r.residual ? r.residual->exact : 0;
  out->identically_zero = r.residual ? r.residual->identically_zero : 0;
  out->residual = r.residual ? r.residual->value : 0.0;
  out->runtime_ms = r.runtime_ms;
  out->params_json = report->params[index].c_str();
  return CONFCOV_OK;
}

confcov_status confcov_report_render(const confcov_report* report, const char* format, char** out) {
  REQUIRE_ARG(report);
  REQUIRE_ARG(format);
  REQUIRE_ARG(out);
  return guarded([&] {
    *out = dup_string(confcov::render_report(report->records, format));
    return CONFCOV_OK;
  });
}

confcov_status confcov_report_write(const confcov_report* report, const char* path, const char* format) {
  REQUIRE_ARG(report);
  REQUIRE_ARG(path);
  REQUIRE_ARG(format);
  return guarded([&] {
    confcov::emit_report(report->records, format, path);
    return CONFCOV_OK;
  });
}

confcov_status confcov_b_coefficients(const char* n, int k, char** out) {
  REQUIRE_ARG(out);
  return guarded([&] {
    auto t = confcov::b_coeffs(parse_rational(n), k);
    std::ostringstream os;
    os << "b coefficients, k = " << k << ", n = " << t.n.get_str() << "\n";
    for (std::size_t j = 0; j < t.b.size(); ++j) os << "b_" << j << " = " << t.b[j].get_str() << "\n";
    *out = dup_string(os.str());
    return CONFCOV_OK;
  });
}

confcov_status confcov_or_coefficients(const char* n, int k, char** out) {
  REQUIRE_ARG(out);
  return guarded([&] {
    auto t = confcov::or_table(parse_rational(n), k);
    std::ostringstream os;
    os << "Ovsienko-Redou coefficients, k = " << k << ", n = " << t.n.get_str() << "\n";
    for (const auto& [idx, v] : t.a)
      os << "a_{" << idx[0] << "," << idx[1] << "," << idx[2] << "} = " << v.get_str() << "\n";
    os << "symmetric: " << (confcov::or_symmetric(t) ? "yes" : "no") << "\n";
    os << "tangency recurrence: " << (confcov::or_tangency_check(t) ? "holds" : "fails") << "\n";
    *out = dup_string(os.str());
    return CONFCOV_OK;
  });
}

confcov_status confcov_rank(const char* invariant, int dim, confcov_rank_result* out, char** witness) {
  REQUIRE_ARG(invariant);
  REQUIRE_ARG(out);
  return guarded([&] {
    auto id = confcov::parse_invariant(invariant);
    static const confcov::FamilySample fam = confcov::rank_family(confcov::RankFamily{});
    auto w = confcov::rank_witness(id, dim, fam.representatives, 3);
    *out = confcov_rank_result{};
    out->rank = w.rank;
    out->witness_degree = w.witness_degree;
    out->certified_zero_count = std::min<std::size_t>(w.certified_zero_degrees.size(), 16);
    for (std::size_t i = 0; i < out->certified_zero_count; ++i) out->certified_zero_degrees[i] = w.certified_zero_degrees[i];
    out->samples = w.samples;
    out->family_size = fam.family_size;
    if (witness) *witness = dup_string(w.witness.to_string());
    return CONFCOV_OK;
  });
}

confcov_status confcov_sphere_check(int k, int* ok, int* t_degree) {
  REQUIRE_ARG(ok);
  return guarded([&] {
    auto s = confcov::sphere_identity_check(k);
    *ok = s.ok() ? 1 : 0;
    if (t_degree) *t_degree = s.t_degree;
    return CONFCOV_OK;
  });
}

}  // extern "C"
