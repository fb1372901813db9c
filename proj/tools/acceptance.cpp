// Runs the twelve acceptance criteria and prints one line per criterion.
#include "confcov/harness.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

using namespace confcov;

namespace {

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<std::vector<CheckRecord>()> run;
};

std::vector<CheckRecord> join(std::vector<std::vector<CheckRecord>> parts) {
  std::vector<CheckRecord> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<CheckRecord> only_anchor(std::vector<CheckRecord> in, const std::string& anchor) {
  std::vector<CheckRecord> out;
  for (auto& r : in)
    if (r.anchor == anchor) out.push_back(std::move(r));
  return out;
}

SuiteConfig with_dims(std::vector<int> dims) {
  SuiteConfig c;
  c.dims = std::move(dims);
  return c;
}

std::string param(const CheckRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.params)
    if (k == key) return v;
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  const SuiteConfig base;
  std::vector<Criterion> criteria = {
      {1, "esp identities (foil, identity, rank one), 200 samples, n in 2..6", 30,
       [&] { return checks::esp_props(with_dims({2, 3, 4, 5, 6})); }},
      {2, "Ovsienko-Redou coefficients: symmetry, tangency, k = 1 and k = 2 values", 5,
       [&] { return checks::or_coefficients(base); }},
      {3, "b recursion: L_2 = -Laplacian, k = 2 gives (b_1, b_2) = (1, 2)", 5,
       [&] { return checks::b_recursion(with_dims({3, 5, 6, 7})); }},
      {4, "power normalization and recovery, k = 2, n in {5, 6, 7}, 10 factors", 300,
       [&] {
         auto c = with_dims({5, 6, 7});
         c.family_size = 10;
         return join({checks::power_normalization(c), checks::recovery(c)});
       }},
      {5, "covariance of D_2 (n = 3, 5, 6, 7) and D_4 (n = 4..7), perturbed controls fail", 300,
       [&] {
         auto c = with_dims({3, 4, 5, 6, 7});
         c.family_size = 3;
         return join({checks::covariance(c), only_anchor(checks::negative_controls(base), "conformal-covariance")});
       }},
      {6, "self-adjointness: flat < 1e-10, curved D_2, D_4 at N = 24 < 1e-6", 600,
       [&] { return join({checks::selfadjoint_flat(base), checks::selfadjoint_curved(with_dims({5}))}); }},
      {7, "polarized Dirichlet energy, k in {2, 3}, to 1e-10", 60, [&] { return checks::dirichlet_energy(base); }},
      {8, "rank: sigma_2 (n = 4) 4, sigma_3 (n = 6) 6, I_1 and I_2 (n = 6) 4", 600,
       [&] { return checks::rank(base); }},
      {9, "sphere family identity for k = 1..5, t-degree 2k - 1", 5,
       [&] {
         return join({checks::sphere(base), only_anchor(checks::negative_controls(base), "sphere-family-closed-form")});
       }},
      {10, "linear relations among L_1, L_2, v_3, B_0, C_0, I_1, I_2, n in {3, 5, 6, 7}", 120,
       [&] { return checks::cvi_relations(with_dims({3, 5, 6, 7})); }},
      {11, "CVI linearization: S(1) = 0 exactly, symmetric to 1e-7 on curved tori", 300,
       [&] { return checks::linearization(base); }},
      {12, "conformal primitive: sigma_2 (n = 4) to 1e-8, v_3 (n = 6) to 1e-6", 600,
       [&] { return checks::primitive(base); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckRecord> recs;
    std::string error;
    try {
      recs = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t pass = 0, fail = 0, skip = 0;
    for (const auto& r : recs) {
      if (r.status == CheckStatus::Pass) ++pass;
      else if (r.status == CheckStatus::Fail) ++fail;
      else ++skip;
    }
    bool ok = error.empty() && fail == 0 && pass > 0 && secs <= c.limit_s;
    if (!ok) ++failed;
    std::printf("%s  criterion %2d: %s  [%zu checks, %zu fail, %zu skip, %.2f s of %.0f s]\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), recs.size(), fail, skip, secs, c.limit_s);
    if (!error.empty()) std::printf("      error: %s\n", error.c_str());
    for (const auto& r : recs) {
      if (c.id == 8 && r.status != CheckStatus::Skip)
        std::printf("      %s: rank %s, zero coefficients %s, witness degree %s, witness %s\n",
                    param(r, "invariant").c_str(), param(r, "rank").c_str(), param(r, "certified_zero_degrees").c_str(),
                    param(r, "witness_degree").c_str(), param(r, "witness").c_str());
      if (r.status == CheckStatus::Fail || verbose) {
        std::string line = render_report({r}, "text");
        std::printf("      %s", line.c_str());
      }
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
