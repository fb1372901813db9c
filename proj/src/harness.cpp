#include "confcov/harness.hpp"

#include "confcov/conformal_variation.hpp"
#include "confcov/sampling.hpp"
#include "confcov/sphere_witness.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

namespace confcov {

using json = nlohmann::ordered_json;

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "?";
}

const std::vector<ToleranceSpec>& default_tolerances() {
  static const std::vector<ToleranceSpec> specs = {
      {"selfadjoint.flat", 1e-10, 1e-14},   {"selfadjoint.curved", 1e-6, 1e-12},
      {"dirichlet", 1e-10, 1e-14},          {"linearization", 1e-7, 1e-13},
      {"linearization.s_one", 1e-10, 1e-15}, {"primitive.sigma2", 1e-8, 1e-13},
      {"primitive.v3", 1e-6, 1e-12},        {"multilinear.grid", 1e-12, 1e-15},
  };
  return specs;
}

const std::map<std::string, int>& default_grids() {
  static const std::map<std::string, int> grids = {
      {"flat", 16}, {"curved", 24}, {"variation", 32}, {"primitive", 16}, {"primitive3d", 12}};
  return grids;
}

double SuiteConfig::tolerance(const std::string& key) const {
  if (auto it = tolerances.find(key); it != tolerances.end()) return it->second;
  for (const auto& t : default_tolerances())
    if (t.key == key) return t.value;
  throw ConfigError("unknown tolerance key: " + key);
}

int SuiteConfig::grid(const std::string& key) const {
  if (auto it = grids.find(key); it != grids.end()) return it->second;
  auto it = default_grids().find(key);
  if (it == default_grids().end()) throw ConfigError("unknown grid key: " + key);
  return it->second;
}

std::vector<int> SuiteConfig::dims_or(std::vector<int> fallback) const { return dims ? *dims : fallback; }

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra",  "coefficients", "flat-operators", "covariance",
                                                 "self-adjointness", "variation", "rank", "primitive",
                                                 "sphere", "negative-controls", "all"};
  return names;
}

void SuiteConfig::validate() const {
  if (suites.empty()) throw ConfigError("no suite selected");
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("unknown suite: " + s);
  if (dims)
    for (int n : *dims)
      if (n < 1 || n > 12) throw ConfigError("dimensions must lie in [1, 12], got " + std::to_string(n));
  for (const auto& [key, n] : grids) {
    if (!default_grids().count(key)) throw ConfigError("unknown grid key: " + key);
    if (n < 4 || n > 256) throw ConfigError("grid resolution must lie in [4, 256]");
  }
  for (const auto& [key, v] : tolerances) {
    auto it = std::find_if(default_tolerances().begin(), default_tolerances().end(),
                           [&](const ToleranceSpec& t) { return t.key == key; });
    if (it == default_tolerances().end()) throw ConfigError("unknown tolerance key: " + key);
    if (!(v >= it->floor)) throw ConfigError("tolerance " + key + " is below its floor");
  }
  if (family_size < 1 || family_size > 1000) throw ConfigError("family_size must lie in [1, 1000]");
  if (format != "json" && format != "text") throw ConfigError("format must be json or text");
}

SuiteConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SuiteConfig cfg;
  static const std::set<std::string> known = {"suites", "dims", "grid", "tolerances", "seed", "family_size", "out", "format"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw ConfigError("unknown config key: " + key);
      if (key == "suites") {
        cfg.suites = value.is_string() ? std::vector<std::string>{value.get<std::string>()}
                                       : value.get<std::vector<std::string>>();
      } else if (key == "dims") {
        cfg.dims = value.get<std::vector<int>>();
      } else if (key == "grid") {
        if (value.is_number_integer()) {
          for (const auto& [g, _] : default_grids()) cfg.grids[g] = value.get<int>();
        } else {
          for (const auto& [g, n] : value.items()) cfg.grids[g] = n.get<int>();
        }
      } else if (key == "tolerances") {
        for (const auto& [t, v] : value.items()) cfg.tolerances[t] = v.get<double>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "family_size") {
        cfg.family_size = value.get<int>();
      } else if (key == "out") {
        cfg.out = value.get<std::string>();
      } else if (key == "format") {
        cfg.format = value.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Record helpers

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string lit(int v) { return std::to_string(v); }
std::string lit(const std::string& s) { return json(s).dump(); }
std::string lit(const char* s) { return json(s).dump(); }
std::string lit(const std::vector<int>& v) { return json(v).dump(); }
std::string lit_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

CheckRecord skip(std::string check, std::string anchor, Params p, const std::string& reason) {
  CheckRecord r{"", std::move(check), std::move(anchor), CheckStatus::Skip, std::nullopt, 0.0, std::move(p)};
  r.params.emplace_back("skip_reason", lit(reason));
  return r;
}

void record_error(CheckRecord& r, const std::exception& e) {
  r.status = CheckStatus::Fail;
  r.params.emplace_back("error", lit(e.what()));
}

// holds() returns true when the identity holds exactly.
CheckRecord exact(std::string check, std::string anchor, Params p, const std::function<bool()>& holds) {
  CheckRecord r{"", std::move(check), std::move(anchor), CheckStatus::Fail, std::nullopt, 0.0, std::move(p)};
  auto t0 = std::chrono::steady_clock::now();
  try {
    bool ok = holds();
    r.residual = Residual::exact_result(ok);
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const std::exception& e) {
    record_error(r, e);
  }
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

CheckRecord numeric(std::string check, std::string anchor, Params p, double tol, const std::function<double()>& f) {
  CheckRecord r{"", std::move(check), std::move(anchor), CheckStatus::Fail, std::nullopt, 0.0, std::move(p)};
  r.params.emplace_back("tolerance", lit_double(tol));
  auto t0 = std::chrono::steady_clock::now();
  try {
    double v = f();
    r.residual = Residual::numeric(v);
    r.status = std::isfinite(v) && v <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const std::exception& e) {
    record_error(r, e);
  }
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

// Negative control: passes when the perturbed identity fails.
CheckRecord control(std::string check, std::string anchor, Params p, const std::function<bool()>& holds) {
  p.emplace_back("expected", lit("fail"));
  CheckRecord r = exact(std::move(check), std::move(anchor), std::move(p), holds);
  if (r.residual) r.status = r.residual->identically_zero ? CheckStatus::Fail : CheckStatus::Pass;
  return r;
}

CheckRecord numeric_control(std::string check, std::string anchor, Params p, double threshold,
                            const std::function<double()>& f) {
  p.emplace_back("expected", lit("fail"));
  p.emplace_back("threshold", lit_double(threshold));
  CheckRecord r{"", std::move(check), std::move(anchor), CheckStatus::Fail, std::nullopt, 0.0, std::move(p)};
  auto t0 = std::chrono::steady_clock::now();
  try {
    double v = f();
    r.residual = Residual::numeric(v);
    r.status = v > threshold ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const std::exception& e) {
    record_error(r, e);
  }
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)}); }

std::string salt(const std::string& group, std::initializer_list<int> keys) {
  std::string s = group;
  for (int k : keys) s += "/" + std::to_string(k);
  return s;
}

std::vector<CheckRecord> no_dims(const std::string& anchor) {
  return {skip("no dimensions selected", anchor, {}, "empty dimension list")};
}

ConfBackground<ExpField> random_symbolic(Sampler& rng, int n, int m, int terms = 4) {
  MultiPoly y = rng.poly(m, 2, terms, 1).scaled(make_rational(1, 2));
  return symbolic_background(n, m, ExpContext::make(y, m), Rational(1));
}

std::vector<GridField> grid_inputs(Sampler& rng, const TorusGridPtr& grid, int count, int band) {
  std::vector<GridField> in;
  for (int i = 0; i < count; ++i) in.push_back(rng.trig(grid, band, 4, 1.0, rng.uniform(0.5, 1.0)));
  return in;
}

const InvariantId kJ{InvariantKind::J, 1};
const InvariantId kQ4{InvariantKind::Q4, 2};
const InvariantId kV3{InvariantKind::V3, 3};
const InvariantId kL1{InvariantKind::L1, 3};
const InvariantId kL2{InvariantKind::L2, 3};
const InvariantId kI1{InvariantKind::I1, 3};
const InvariantId kI2{InvariantKind::I2, 3};

}  // namespace

// ---------------------------------------------------------------------------
// Groups

namespace checks {

std::vector<CheckRecord> esp_props(const SuiteConfig& cfg) {
  const std::string anchor = "esp-expansion-identities";
  auto dims = cfg.dims_or({2, 3, 4, 5, 6});
  if (dims.empty()) return no_dims(anchor);
  const int samples = 200;
  std::vector<CheckRecord> out;
  for (int n : dims)
    for (int k = 1; k <= n; ++k) {
      Params p{{"n", lit(n)}, {"k", lit(k)}, {"samples", lit(samples)}};
      Sampler rng(cfg.seed, salt("esp", {n, k}));
      EspPropsResult res;
      auto t0 = std::chrono::steady_clock::now();
      std::optional<std::string> error;
      try {
        res = esp_props_check(n, k, samples, rng);
      } catch (const std::exception& e) {
        error = e.what();
      }
      double ms = elapsed_ms(t0);
      auto one = [&](const std::string& name, bool ok) {
        CheckRecord r = exact(name, anchor, p, [&] {
          if (error) throw DomainError(*error);
          return ok;
        });
        r.runtime_ms = ms;  // shared batch
        out.push_back(std::move(r));
      };
      one("foil", res.foil);
      one("foil with identity", res.foil_identity);
      one("foil with rank one", res.foil_rank1);
    }
  return out;
}

std::vector<CheckRecord> cvi_relations(const SuiteConfig& cfg) {
  const std::string anchor = "cvi-linear-relations";
  auto dims = cfg.dims_or({3, 5, 6, 7});
  if (dims.empty()) return no_dims(anchor);
  std::vector<CheckRecord> out;
  for (int n : dims) {
    if (n <= 2) {
      out.push_back(skip("relations", anchor, {{"n", lit(n)}}, "relations need n > 2"));
      continue;
    }
    Sampler rng(cfg.seed, salt("relations", {n}));
    auto bg = random_symbolic(rng, n, std::min(n, 3), 5);
    std::vector<RelationResidual> res;
    std::optional<std::string> error;
    auto t0 = std::chrono::steady_clock::now();
    try {
      res = relations_check(bg);
    } catch (const std::exception& e) {
      error = e.what();
    }
    double ms = elapsed_ms(t0);
    if (error) {
      CheckRecord r = exact("relations", anchor, {{"n", lit(n)}}, [&]() -> bool { throw DomainError(*error); });
      out.push_back(std::move(r));
      continue;
    }
    for (const auto& rr : res) {
      CheckRecord r = exact(rr.relation, anchor, {{"n", lit(n)}}, [&] { return rr.identically_zero; });
      r.runtime_ms = ms / static_cast<double>(res.size());
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CheckRecord> or_coefficients(const SuiteConfig&) {
  const std::string anchor = "ovsienko-redou-coefficients";
  std::vector<CheckRecord> out;
  for (int k = 1; k <= 6; ++k)
    for (int n = 2 * k; n <= 2 * k + 6; ++n) {
      Params p{{"k", lit(k)}, {"n", lit(n)}};
      OrCoefficientTable tab;
      out.push_back(exact("total symmetry", anchor, p, [&] {
        tab = or_table(Rational(n), k);
        return or_symmetric(tab);
      }));
      out.push_back(exact("tangency recurrence", anchor, p, [&] { return or_tangency_check(tab); }));
    }
  out.push_back(exact("k = 1 coefficients are 1", anchor, {{"n", lit("2..9")}}, [] {
    for (int n = 2; n <= 9; ++n)
      for (const auto& [idx, v] : or_table(Rational(n), 1).a)
        if (v != 1) return false;
    return true;
  }));
  out.push_back(exact("k = 2 prefactor 2(n-4)/(n+2)", anchor, {{"n", lit("2..9")}}, [] {
    for (int n = 2; n <= 9; ++n) {
      Rational expect = Rational(2 * (n - 4)) / (n + 2);
      if (or_coeff(Rational(n), 2, 0, 1, 1) != expect) return false;
      if (D4Coefficients::for_dimension(n).laplacian_mix != expect) return false;
    }
    return true;
  }));
  return out;
}

std::vector<CheckRecord> b_recursion(const SuiteConfig& cfg) {
  const std::string anchor = "b-recursion";
  auto dims = cfg.dims_or({3, 5, 6, 7});
  if (dims.empty()) return no_dims(anchor);
  std::vector<CheckRecord> out;
  for (int n : dims) {
    Params p{{"n", lit(n)}};
    out.push_back(exact("k = 1 gives b = (0, 2)", anchor, p,
                        [&] { return b_coeffs(Rational(n), 1).b == std::vector<Rational>{0, 2}; }));
    out.push_back(exact("k = 2 gives (b_1, b_2) = (1, 2)", anchor, p,
                        [&] { return b_coeffs(Rational(n), 2).b == std::vector<Rational>{0, 1, 2}; }));
    out.push_back(exact("L_2 = -Laplacian", anchor, p, [&] {
      Sampler rng(cfg.seed, salt("l2", {n}));
      const int m = std::min(n, 3);
      auto ctx = ExpContext::make(MultiPoly(m), m);
      auto flat = symbolic_flat(n, m, ctx);
      for (int rep = 0; rep < 3; ++rep) {
        ExpField u = ExpField::polynomial(ctx, rng.poly(m, 3, 5));
        if (!(l2k_apply(1, {u}, flat) == -laplacian(u, flat))) return false;
      }
      return true;
    }));
  }
  out.push_back(exact("recursion residual, k <= 6", anchor, {{"n", lit("13/3")}}, [] {
    Rational n = make_rational(13, 3);
    for (int k = 1; k <= 6; ++k) {
      auto t = b_coeffs(n, k);
      for (int j = 0; j < k; ++j) {
        Rational lhs = Rational(k + j) / 2 * t.b[static_cast<std::size_t>(j + 1)] +
                       (n - 2 * k) * (k + j + 1) / Rational(2 * k) * t.b[static_cast<std::size_t>(j)];
        if (lhs != binomial(n - k + j, j)) return false;
      }
    }
    return true;
  }));
  return out;
}

std::vector<CheckRecord> flat_operators(const SuiteConfig& cfg) {
  const std::string anchor = "flat-polydifferential-operators";
  auto dims = cfg.dims_or({5});
  if (dims.empty()) return no_dims(anchor);
  std::vector<CheckRecord> out;
  for (int n : dims) {
    const int m = std::min(n, 2);
    auto ctx = ExpContext::make(MultiPoly(m), m);
    auto flat = symbolic_flat(n, m, ctx);
    Sampler rng(cfg.seed, salt("flat", {n}));
    auto poly = [&](int deg = 2) { return ExpField::polynomial(ctx, rng.poly(m, deg, 4)); };
    Params p{{"n", lit(n)}};
    out.push_back(exact("D_0^1 = -Laplacian", anchor, p, [&] {
      ExpField u = poly(3);
      return djk_apply(0, 1, {u}, flat) == -laplacian(u, flat);
    }));
    for (int k = 2; k <= 3; ++k)
      out.push_back(exact("D_0^k is the 2k-Laplacian", anchor, {{"n", lit(n)}, {"k", lit(k)}}, [&] {
        ExpField u = poly(3);
        auto du = differential(u, flat);
        ExpField g2 = flat_pairing(du, du, flat);
        ExpField pw = k == 2 ? g2 : g2 * g2;
        return djk_diagonal(0, k, u, flat) == -divergence(scale_form(du, pw), flat);
      }));
    out.push_back(exact("L_2k annihilates constants", anchor, {{"n", lit(n)}, {"k", lit("1..3")}}, [&] {
      ExpField one = flat.constant(Rational(1));
      for (int k = 1; k <= 3; ++k) {
        if (n == 2 * k) continue;
        if (!l2k_apply(k, std::vector<ExpField>(static_cast<std::size_t>(2 * k - 1), one), flat).is_zero()) return false;
      }
      return true;
    }));
    for (int k = 2; k <= 3; ++k)
      for (int j = 0; j < k; ++j) {
        Params pj{{"n", lit(n)}, {"j", lit(j)}, {"k", lit(k)}};
        out.push_back(exact("coalesced sum equals the full permutation sum", anchor, pj, [&] {
          std::vector<ExpField> in;
          for (int i = 0; i < 2 * k - 1; ++i) in.push_back(poly());
          return djk_apply(j, k, in, flat) == djk_apply_unfolded(j, k, in, flat);
        }));
        out.push_back(exact("symmetric in its inputs", anchor, pj, [&] {
          std::vector<ExpField> in;
          for (int i = 0; i < 2 * k - 1; ++i) in.push_back(poly());
          auto rot = in;
          std::rotate(rot.begin(), rot.begin() + 1, rot.end());
          return djk_apply(j, k, in, flat) == djk_apply(j, k, rot, flat);
        }));
      }
    out.push_back(exact("top-degree operator: k = 1 is the Laplacian, k = 3 kills constants", anchor, p, [&] {
      ExpField u = poly(3);
      if (!(top_degree_apply(1, {u}, flat) == laplacian(u, flat))) return false;
      std::vector<ExpField> in{poly(), flat.constant(make_rational(5, 2)), poly()};
      return top_degree_apply(3, in, flat).is_zero();
    }));
  }
  return out;
}

std::vector<CheckRecord> power_normalization(const SuiteConfig& cfg) {
  const std::string anchor = "power-normalization";
  std::vector<CheckRecord> out;
  for (int k = 1; k <= 2; ++k) {
    auto dims = cfg.dims_or(k == 1 ? std::vector<int>{3, 5, 6, 7} : std::vector<int>{5, 6, 7});
    if (dims.empty()) return no_dims(anchor);
    for (int n : dims) {
      Params p{{"k", lit(k)}, {"n", lit(n)}, {"family_size", lit(cfg.family_size)}};
      if (n <= 2 * k) {
        out.push_back(skip("L_2k(u, ..., u) against sigma_k", anchor, p, "needs n > 2k"));
        continue;
      }
      out.push_back(exact("L_2k(u, ..., u) against sigma_k", anchor, p, [&] {
        Sampler rng(cfg.seed, salt("power-normalization", {k, n}));
        for (int s = 0; s < cfg.family_size; ++s) {
          const int m = 2 + s % 2;
          MultiPoly y = rng.poly(m, 2, 5, 1);
          if (!power_normalization_check(k, n, y, m, make_rational(1, 3)).is_zero()) return false;
        }
        return true;
      }));
    }
  }
  return out;
}

std::vector<CheckRecord> recovery(const SuiteConfig& cfg) {
  const std::string anchor = "operator-recovers-invariant";
  auto dims = cfg.dims_or({3, 5, 6, 7});
  if (dims.empty()) return no_dims(anchor);
  std::vector<CheckRecord> out;
  for (int n : dims) {
    Sampler rng(cfg.seed, salt("recovery", {n}));
    MultiPoly y = rng.poly(2, 2, 3);
    Params p{{"n", lit(n)}};
    if (n > 2) {
      out.push_back(exact("D_2 recovers 12/(n-2) J", anchor, p, [&] {
        InvariantCombo target{{{Rational(12) / (n - 2), kJ}}};
        return recovery_check(ovsienko_redou_operator(2), target, n, y, 2).is_zero();
      }));
      out.push_back(exact("conformal Laplacian recovers J", anchor, p, [&] {
        return recovery_check(conformal_laplacian_operator(), InvariantCombo{{{Rational(1), kJ}}}, n, y, 2).is_zero();
      }));
    } else {
      out.push_back(skip("D_2 recovers 12/(n-2) J", anchor, p, "needs n > 2"));
    }
    if (n > 4) {
      out.push_back(exact("L_4 recovers sigma_2", anchor, p, [&] {
        InvariantCombo target{{{Rational(1), InvariantId::sigma(2)}}};
        return recovery_check(l2k_operator(2), target, n, y, 2).is_zero();
      }));
      out.push_back(exact("D_4 recovers its Q_4, sigma_2 combination", anchor, p, [&] {
        auto c = D4Coefficients::for_dimension(n);
        Rational a = Rational(n - 4) / 3;
        InvariantCombo target{{{c.q4 / (a * a), kQ4}, {c.sigma2 / (a * a), InvariantId::sigma(2)}}};
        return recovery_check(ovsienko_redou_operator(4), target, n, y, 2).is_zero();
      }));
    }
  }
  return out;
}

std::vector<CheckRecord> covariance(const SuiteConfig& cfg) {
  const std::string anchor = "conformal-covariance";
  auto dims = cfg.dims_or({3, 4, 5, 6, 7});
  if (dims.empty()) return no_dims(anchor);
  std::vector<CheckRecord> out;
  const int m = 2;
  struct Op {
    OperatorDescriptor d;
    int min_n;
  };
  std::vector<Op> ops{{ovsienko_redou_operator(2), 3}, {ovsienko_redou_operator(4), 4},
                      {conformal_laplacian_operator(), 3}};
  for (int n : dims)
    for (const auto& op : ops) {
      Params p{{"operator", lit(op.d.name)}, {"n", lit(n)}, {"samples", lit(cfg.family_size)}};
      auto [a, b] = op.d.bidegree_for(n);
      p.emplace_back("bidegree", json::array({a.get_str(), b.get_str()}).dump());
      if (n < op.min_n) {
        out.push_back(skip("covariance residual", anchor, p, "dimension below operator range"));
        continue;
      }
      out.push_back(exact("covariance residual", anchor, p, [&, n] {
        Sampler rng(cfg.seed, "covariance/" + op.d.name + "/" + std::to_string(n));
        for (int s = 0; s < cfg.family_size; ++s) {
          MultiPoly y = rng.poly(m, 2, 4, 1);
          std::vector<MultiPoly> in;
          for (int i = 0; i < op.d.arity; ++i) in.push_back(rng.poly(m, 2, 3));
          if (!covariance_check(op.d, y, in, n, m).is_zero()) return false;
        }
        return true;
      }));
    }
  return out;
}

std::vector<CheckRecord> selfadjoint_flat(const SuiteConfig& cfg) {
  const std::string anchor = "formal-self-adjointness";
  const int N = cfg.grid("flat");
  const double tol = cfg.tolerance("selfadjoint.flat");
  auto grid = TorusGrid::make({N, N});
  auto flat = torus_flat(5, grid);
  Sampler rng(cfg.seed, "selfadjoint/flat");
  std::vector<CheckRecord> out;
  auto add = [&](const OperatorDescriptor& op, int band) {
    Params p{{"operator", lit(op.name)}, {"grid", lit(std::vector<int>{N, N})}, {"band", lit(band)}};
    auto in = grid_inputs(rng, grid, op.arity + 1, band);
    out.push_back(numeric("permutation deviation, flat torus", anchor, p, tol,
                          [&] { return selfadjointness_check(op, in, flat); }));
  };
  add(minus_laplacian_operator(), 3);
  add(top_degree_operator(3), 1);
  for (int k = 2; k <= 3; ++k)
    for (int j = 0; j < k; ++j) add(djk_operator(j, k), 1);
  return out;
}

std::vector<CheckRecord> selfadjoint_curved(const SuiteConfig& cfg) {
  const std::string anchor = "formal-self-adjointness";
  const int N = cfg.grid("curved");
  const double tol = cfg.tolerance("selfadjoint.curved");
  auto dims = cfg.dims_or({5});
  if (dims.empty()) return no_dims(anchor);
  auto grid = TorusGrid::make({N, N, N});
  std::vector<CheckRecord> out;
  for (int n : dims) {
    Sampler rng(cfg.seed, salt("selfadjoint/curved", {n}));
    auto bg = torus_background(n, rng.trig(grid, 1, 3, 0.1));
    for (int order : {2, 4}) {
      auto op = ovsienko_redou_operator(order);
      Params p{{"operator", lit(op.name)}, {"n", lit(n)}, {"grid", lit(std::vector<int>{N, N, N})},
               {"phi_amplitude", lit_double(0.1)}};
      if (n < (order == 2 ? 3 : 4)) {
        out.push_back(skip("permutation deviation, curved torus", anchor, p, "dimension below operator range"));
        continue;
      }
      auto in = grid_inputs(rng, grid, 3, 2);
      out.push_back(numeric("permutation deviation, curved torus", anchor, p, tol,
                            [&] { return selfadjointness_check(op, in, bg); }));
    }
  }
  return out;
}

std::vector<CheckRecord> dirichlet_energy(const SuiteConfig& cfg) {
  const std::string anchor = "polarized-dirichlet-energy";
  const int N = cfg.grid("flat");
  const double tol = cfg.tolerance("dirichlet");
  auto grid = TorusGrid::make({N, N});
  auto flat = torus_flat(6, grid);
  Sampler rng(cfg.seed, "dirichlet");
  std::vector<CheckRecord> out;
  for (int k = 2; k <= 3; ++k)
    for (int j = 0; j < k; ++j) {
      Params p{{"j", lit(j)}, {"k", lit(k)}, {"grid", lit(std::vector<int>{N, N})}};
      auto in = grid_inputs(rng, grid, 2 * k, 1);
      out.push_back(numeric("(2k)! int u_0 D_j^k against the energy density", anchor, p, tol, [&] {
        std::vector<GridField> rest(in.begin() + 1, in.end());
        double lhs = to_double(factorial(2 * k)) * integrate(in[0] * djk_apply(j, k, rest, flat), flat);
        double rhs = double(k) / (k - j) * integrate(djk_energy_density(j, k, in, flat), flat);
        return rel_diff(lhs, rhs);
      }));
    }
  return out;
}

std::vector<CheckRecord> jets(const SuiteConfig& cfg) {
  const std::string anchor = "conformal-jet";
  auto dims = cfg.dims_or({5});
  if (dims.empty()) return no_dims(anchor);
  std::vector<CheckRecord> out;
  for (int n : dims) {
    Params p{{"n", lit(n)}};
    if (n < 3) {
      out.push_back(skip("jet checks", anchor, p, "needs n >= 3"));
      continue;
    }
    Sampler rng(cfg.seed, salt("jets", {n}));
    auto bg = random_symbolic(rng, n, 2, 3);
    MultiPoly y = rng.poly(2, 2, 3);
    std::vector<InvariantId> ids{kJ, InvariantId::sigma(2), kQ4, kV3, kL2};
    out.push_back(exact("constant directions give constant jets", anchor, p, [&] {
      for (const auto& id : ids) {
        auto jet = conformal_jet(id, MultiPoly::constant(2, make_rational(3, 2)), bg);
        if (!(jet.c[0] == evaluate_invariant(id, bg))) return false;
        for (std::size_t j = 1; j < jet.c.size(); ++j)
          if (!jet.c[j].is_zero()) return false;
      }
      return true;
    }));
    out.push_back(exact("jet agrees with direct rescaling at rational t", anchor, p, [&] {
      for (const auto& id : ids) {
        auto jet = conformal_jet(id, y, bg);
        if (static_cast<int>(jet.c.size()) - 1 > 2 * id.weight_k()) return false;
        for (Rational t : {make_rational(1, 3), make_rational(-2, 5), Rational(2)})
          if (!(jet.at(t) == rescaled_invariant(id, y, bg, t))) return false;
      }
      return true;
    }));
    out.push_back(exact("linearization of J at a flat metric is -Laplacian", anchor, p, [&] {
      auto ctx = ExpContext::make(MultiPoly(3), 3);
      auto flat = symbolic_flat(n, 3, ctx);
      MultiPoly w = rng.poly(3, 3, 5);
      return linearization(kJ, w, flat) == -laplacian(ExpField::polynomial(ctx, w), flat);
    }));
    out.push_back(exact("L_1^l(1) = ((n-2k)(l-1)/l) L for sigma_2", anchor, p, [&] {
      for (int ell = 1; ell <= 3; ++ell)
        if (!l1ell_check(InvariantId::sigma(2), ell, bg).is_zero()) return false;
      return true;
    }));
  }
  out.push_back(exact("critical jets vanish from degree 2k", anchor, {{"invariants", lit("sigma2@4, v3@6")}}, [&] {
    Sampler rng(cfg.seed, "jets/critical");
    auto ctx = ExpContext::make(MultiPoly(2), 2);
    for (int rep = 0; rep < 3; ++rep) {
      MultiPoly y = rng.poly(2, 3, 4);
      if (conformal_jet(InvariantId::sigma(2), y, symbolic_flat(4, 2, ctx)).c.size() > 4) return false;
      if (conformal_jet(kV3, y, symbolic_flat(6, 2, ctx)).c.size() > 6) return false;
    }
    return true;
  }));
  out.push_back(exact("second variation is symmetric and polarizes c_2", anchor, {{"n", lit(4)}}, [&] {
    Sampler rng(cfg.seed, "jets/second");
    auto bg = random_symbolic(rng, 4, 2, 3);
    MultiPoly u = rng.poly(2, 2, 3), v = rng.poly(2, 2, 3);
    for (const auto& id : {InvariantId::sigma(2), kQ4}) {
      if (!(mixed_second_variation(id, u, v, bg) == mixed_second_variation(id, v, u, bg))) return false;
      if (!(mixed_second_variation(id, u, u, bg) == scale(conformal_jet(id, u, bg).coeff(2), Rational(2))))
        return false;
    }
    return true;
  }));
  return out;
}

std::vector<CheckRecord> linearization(const SuiteConfig& cfg) {
  const std::string anchor = "cvi-linearization";
  const int N = cfg.grid("variation");
  const double tol = cfg.tolerance("linearization"), tol_one = cfg.tolerance("linearization.s_one");
  std::vector<InvariantId> ids{kJ, InvariantId::sigma(2), InvariantId::sigma(3), kI1, kI2, kL1, kL2};
  std::vector<CheckRecord> out;
  {
    Sampler rng(cfg.seed, "linearization/symbolic");
    auto sbg = random_symbolic(rng, 5, 2, 3);
    for (const auto& id : ids)
      out.push_back(exact("S(1) = 0", anchor, {{"invariant", lit(id.name())}, {"n", lit(5)}},
                          [&] { return linearization(id, MultiPoly::constant(2, Rational(1)), sbg).is_zero(); }));
  }
  Sampler rng(cfg.seed, "linearization/torus");
  auto grid = TorusGrid::make({N, N});
  auto bg = torus_background(5, rng.trig(grid, 1, 3, 0.1));
  GridField u = rng.trig(grid, 1, 3, 0.2), v = rng.trig(grid, 1, 3, 0.2);
  for (const auto& id : ids) {
    Params p{{"invariant", lit(id.name())}, {"n", lit(5)}, {"grid", lit(std::vector<int>{N, N})}};
    LinearizationSymmetry r;
    auto t0 = std::chrono::steady_clock::now();
    std::optional<std::string> error;
    try {
      r = linearization_selfadjoint_check(id, bg, u, v);
    } catch (const std::exception& e) {
      error = e.what();
    }
    double ms = elapsed_ms(t0);
    auto rec_a = numeric("int u S(v) = int v S(u)", anchor, p, tol, [&] {
      if (error) throw DomainError(*error);
      return r.asymmetry;
    });
    auto rec_b = numeric("S(1) on the torus, relative to max |L|", anchor, p, tol_one, [&] {
      if (error) throw DomainError(*error);
      return r.s_one_max;
    });
    rec_a.runtime_ms = rec_b.runtime_ms = ms;
    out.push_back(std::move(rec_a));
    out.push_back(std::move(rec_b));
  }
  return out;
}

std::vector<CheckRecord> rank(const SuiteConfig& cfg) {
  const std::string anchor = "cvi-rank";
  struct Case {
    InvariantId id;
    int n;
    int rank;
  };
  std::vector<Case> cases{{InvariantId::sigma(2), 4, 4}, {InvariantId::sigma(3), 6, 6}, {kI1, 6, 4}, {kI2, 6, 4}};
  RankFamily fam_spec;  // 3 variables, degree 2, coefficients {-1, 0, 1}
  static const FamilySample fam = rank_family(fam_spec);
  std::vector<CheckRecord> out;
  for (const auto& c : cases) {
    Params p{{"invariant", lit(c.id.name())}, {"n", lit(c.n)}, {"expected_rank", lit(c.rank)},
             {"family", lit("degree <= 2 in 3 variables, coefficients in {-1,0,1}")},
             {"family_size", std::to_string(fam.family_size)},
             {"representatives", std::to_string(fam.representatives.size())}};
    if (cfg.dims && std::find(cfg.dims->begin(), cfg.dims->end(), c.n) == cfg.dims->end()) {
      out.push_back(skip("rank certified on the family", anchor, p, "critical dimension not selected"));
      continue;
    }
    RankWitness w;
    CheckRecord r = exact("rank certified on the family", anchor, p, [&] {
      w = rank_witness(c.id, c.n, fam.representatives, 3);
      std::vector<int> zeros;
      for (int j = c.rank; j <= c.n; ++j) zeros.push_back(j);
      return w.rank == c.rank && w.certified_zero_degrees == zeros;
    });
    r.params.emplace_back("rank", lit(w.rank));
    r.params.emplace_back("certified_zero_degrees", lit(w.certified_zero_degrees));
    r.params.emplace_back("witness_degree", lit(w.witness_degree));
    r.params.emplace_back("witness", lit(w.witness.to_string()));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckRecord> primitive(const SuiteConfig& cfg) {
  const std::string anchor = "conformal-primitive";
  std::vector<CheckRecord> out;
  struct Case {
    InvariantId id;
    int n;
    int axes;
    std::string grid_key, tol_key;
  };
  for (const auto& c : {Case{InvariantId::sigma(2), 4, 2, "primitive", "primitive.sigma2"},
                        Case{kV3, 6, 3, "primitive3d", "primitive.v3"}}) {
    const int N = cfg.grid(c.grid_key);
    const double tol = cfg.tolerance(c.tol_key);
    Params p{{"invariant", lit(c.id.name())}, {"n", lit(c.n)},
             {"grid", lit(std::vector<int>(static_cast<std::size_t>(c.axes), N))}};
    if (cfg.dims && std::find(cfg.dims->begin(), cfg.dims->end(), c.n) == cfg.dims->end()) {
      out.push_back(skip("path independence", anchor, p, "critical dimension not selected"));
      continue;
    }
    Sampler rng(cfg.seed, "primitive/" + c.id.name());
    auto grid = TorusGrid::make(std::vector<int>(static_cast<std::size_t>(c.axes), N));
    auto bg = torus_background(c.n, rng.trig(grid, 1, 3, 0.1));
    GridField u = rng.trig(grid, 1, 3, 0.4);
    double lin = 0, smooth = 0, closed = 0;
    out.push_back(numeric("linear path against smoothstep path", anchor, p, tol, [&] {
      lin = conformal_primitive_path(c.id, u, bg, PrimitivePath::Linear);
      smooth = conformal_primitive_path(c.id, u, bg, PrimitivePath::Smoothstep);
      return rel_diff(lin, smooth);
    }));
    out.push_back(numeric("path against closed form", anchor, p, tol, [&] {
      closed = conformal_primitive_closed(c.id, u, bg);
      return rel_diff(lin, closed);
    }));
    out.back().params.emplace_back("value", lit_double(closed));
  }
  return out;
}

std::vector<CheckRecord> sphere(const SuiteConfig&) {
  const std::string anchor = "sphere-family-closed-form";
  std::vector<CheckRecord> out;
  for (int k = 1; k <= 5; ++k) {
    SphereCheck s;
    CheckRecord r = exact("sigma_k sphere family identity", anchor, {{"k", lit(k)}}, [&] {
      s = sphere_identity_check(k);
      return s.ok();
    });
    r.params.emplace_back("t_degree", lit(s.t_degree));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckRecord> negative_controls(const SuiteConfig& cfg) {
  const std::string anchor_or = "ovsienko-redou-coefficients";
  std::vector<CheckRecord> out;
  out.push_back(control("perturbed a_{1,1,1} breaks tangency", anchor_or, {{"k", lit(3)}, {"n", lit(9)}}, [] {
    auto tab = or_table(Rational(9), 3);
    tab.a[{1, 1, 1}] += 1;
    return or_tangency_check(tab);
  }));
  out.push_back(control("perturbed a_{0,1,2} breaks symmetry", anchor_or, {{"k", lit(3)}, {"n", lit(9)}}, [] {
    auto tab = or_table(Rational(9), 3);
    tab.a[{0, 1, 2}] += make_rational(1, 7);
    return or_symmetric(tab);
  }));

  Sampler rng(cfg.seed, "controls");
  const int m = 2, n = 5;
  MultiPoly y = rng.poly(m, 2, 4, 1);
  std::vector<MultiPoly> uv{rng.poly(m, 2, 3), rng.poly(m, 2, 3)};
  out.push_back(control("b = (0, 1, 3) breaks the normalization", "power-normalization", {{"n", lit(n)}}, [&] {
    return power_normalization_check(2, n, y, m, Rational(1), std::vector<Rational>{0, 1, 3}).is_zero();
  }));
  const std::pair<const char*, Rational D4Coefficients::*> fields[] = {
      {"q4", &D4Coefficients::q4},
      {"sigma2", &D4Coefficients::sigma2},
      {"laplacian_mix", &D4Coefficients::laplacian_mix},
      {"j_divergence", &D4Coefficients::j_divergence},
      {"p_divergence", &D4Coefficients::p_divergence}};
  for (const auto& [name, field] : fields)
    out.push_back(control(std::string("D_4 with perturbed ") + name + " is not covariant", "conformal-covariance",
                          {{"n", lit(n)}, {"perturbation", lit("1/10")}}, [&, field = field] {
                            auto c = D4Coefficients::for_dimension(n);
                            c.*field += make_rational(1, 10);
                            return covariance_check(ovsienko_redou_operator(4, c), y, uv, n, m).is_zero();
                          }));
  out.push_back(control("D_2 with a wrong Schouten trace is not covariant", "conformal-covariance", {{"n", lit(n)}},
                        [&] {
                          SchoutenCoefficients bad;
                          bad.trace = make_rational(-1, 3);
                          return covariance_check(ovsienko_redou_operator(2, std::nullopt, bad), y, uv, n, m).is_zero();
                        }));
  out.push_back(control("-Laplacian is not covariant", "conformal-covariance", {{"n", lit(n)}},
                        [&] { return covariance_check(minus_laplacian_operator(), y, {uv[0]}, n, m).is_zero(); }));
  out.push_back(control("D_2 does not recover 11/(n-2) J", "operator-recovers-invariant", {{"n", lit(n)}}, [&] {
    InvariantCombo wrong{{{Rational(11) / (n - 2), kJ}}};
    return recovery_check(ovsienko_redou_operator(2), wrong, n, y, 2).is_zero();
  }));
  for (int k = 1; k <= 5; ++k)
    out.push_back(control("mutated binomial breaks the sphere identity", "sphere-family-closed-form", {{"k", lit(k)}},
                          [k] {
                            Rational wrong = binomial(Rational(2 * k - 1), k - 1) + 1;
                            return sphere_identity_check(k, wrong).identity;
                          }));
  {
    const int N = cfg.grid("variation");
    Sampler trng(cfg.seed, "controls/torus");
    auto grid = TorusGrid::make({N, N});
    auto bg = torus_background(5, trng.trig(grid, 1, 3, 0.1));
    GridField u = trng.trig(grid, 1, 3, 0.2), v = trng.trig(grid, 1, 3, 0.2);
    out.push_back(numeric_control("J^2 has a non-self-adjoint linearization", "cvi-linearization",
                                  {{"invariant", lit("J2")}, {"grid", lit(std::vector<int>{N, N})}}, 1e-3, [&] {
                                    return linearization_selfadjoint_check(parse_invariant("J2"), bg, u, v).asymmetry;
                                  }));
  }
  out.push_back(control("flat-only operators refuse covariance checks", "conformal-covariance", {}, [] {
    try {
      covariance_check(djk_operator(1, 2), MultiPoly::variable(2, 0), {}, 4, 2);
      return true;
    } catch (const DomainError&) {
      return false;
    }
  }));
  return out;
}

}  // namespace checks

// ---------------------------------------------------------------------------
// Suites

namespace {

using Group = std::vector<CheckRecord> (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, std::vector<Group>>>& suite_table() {
  static const std::vector<std::pair<std::string, std::vector<Group>>> table = {
      {"algebra", {checks::esp_props, checks::cvi_relations}},
      {"coefficients", {checks::or_coefficients, checks::b_recursion}},
      {"flat-operators", {checks::flat_operators, checks::power_normalization, checks::recovery}},
      {"covariance", {checks::covariance}},
      {"self-adjointness", {checks::selfadjoint_flat, checks::selfadjoint_curved, checks::dirichlet_energy}},
      {"variation", {checks::jets, checks::linearization}},
      {"rank", {checks::rank}},
      {"primitive", {checks::primitive}},
      {"sphere", {checks::sphere}},
      {"negative-controls", {checks::negative_controls}},
  };
  return table;
}

}  // namespace

std::vector<CheckRecord> run_suite(const std::string& name, const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<CheckRecord> out;
  for (const auto& [suite, groups] : suite_table()) {
    if (name != "all" && name != suite) continue;
    for (Group g : groups)
      for (auto& r : g(cfg)) {
        r.suite = suite;
        out.push_back(std::move(r));
      }
  }
  if (out.empty() && name != "all" &&
      std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
    throw ConfigError("unknown suite: " + name);
  return out;
}

std::vector<CheckRecord> run_config(const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<CheckRecord> out;
  for (const auto& s : cfg.suites) {
    auto part = run_suite(s, cfg);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

bool any_failure(const std::vector<CheckRecord>& records) {
  return std::any_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.status == CheckStatus::Fail; });
}

std::string render_report(const std::vector<CheckRecord>& records, const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : records) {
      json o;
      o["suite"] = r.suite;
      o["check"] = r.check;
      o["anchor"] = r.anchor;
      o["status"] = status_name(r.status);
      if (!r.residual) o["residual"] = nullptr;
      else if (r.residual->exact) o["residual"] = json{{"identically_zero", r.residual->identically_zero}};
      else o["residual"] = r.residual->value;
      o["runtime_ms"] = std::round(r.runtime_ms * 1000.0) / 1000.0;
      json params = json::object();
      for (const auto& [k, v] : r.params) params[k] = json::parse(v);
      o["params"] = params;
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }
  if (format == "text") {
    std::ostringstream os;
    for (const auto& r : records) {
      os << status_name(r.status) << "  " << r.suite << " | " << r.check << " | " << r.anchor << " | ";
      if (!r.residual) os << "-";
      else if (r.residual->exact) os << (r.residual->identically_zero ? "identically zero" : "nonzero");
      else os << std::setprecision(3) << std::scientific << r.residual->value << std::defaultfloat;
      os << " | ";
      bool first = true;
      for (const auto& [k, v] : r.params) {
        os << (first ? "" : " ") << k << "=" << v;
        first = false;
      }
      os << " | " << std::fixed << std::setprecision(1) << r.runtime_ms << " ms" << std::defaultfloat << "\n";
    }
    return os.str();
  }
  throw ConfigError("format must be json or text");
}

void emit_report(const std::vector<CheckRecord>& records, const std::string& format, const std::string& path) {
  if (records.empty()) throw ConfigError("no records to report");
  std::string text = render_report(records, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportIoError("cannot write report to " + path);
  out << text;
  if (!out) throw ReportIoError("write failed for " + path);
}

}  // namespace confcov
