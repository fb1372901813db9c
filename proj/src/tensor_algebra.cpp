#include "confcov/tensor_algebra.hpp"

#include "confcov/sampling.hpp"

namespace confcov {

int permutation_sign(std::span<const int> perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t c = s; !seen[c]; c = static_cast<std::size_t>(perm[c])) {
      seen[c] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

int gen_kronecker(std::span<const int> upper, std::span<const int> lower, int n) {
  if (upper.size() != lower.size()) throw DomainError("generalized Kronecker delta needs matching ranks");
  for (int v : upper)
    if (v < 0 || v >= n) throw DomainError("Kronecker index out of range");
  for (int v : lower)
    if (v < 0 || v >= n) throw DomainError("Kronecker index out of range");
  const std::size_t k = upper.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int total = 0;
  do {
    bool hit = true;
    for (std::size_t a = 0; a < k && hit; ++a) hit = upper[a] == lower[static_cast<std::size_t>(perm[a])];
    if (hit) total += permutation_sign(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

namespace detail {

const std::vector<std::pair<CyclePattern, long>>& cycle_expansion(const std::vector<int>& classes) {
  thread_local std::map<std::vector<int>, std::vector<std::pair<CyclePattern, long>>> cache;
  auto it = cache.find(classes);
  if (it != cache.end()) return it->second;
  const std::size_t k = classes.size();
  std::map<CyclePattern, long> counts;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<bool> seen(k, false);
    CyclePattern pattern;
    for (std::size_t s = 0; s < k; ++s) {
      if (seen[s]) continue;
      std::vector<int> word;
      for (std::size_t c = s; !seen[c]; c = static_cast<std::size_t>(perm[c])) {
        seen[c] = true;
        word.push_back(classes[c]);
      }
      std::vector<int> best = word;
      for (std::size_t r = 1; r < word.size(); ++r) {
        std::rotate(word.begin(), word.begin() + 1, word.end());
        if (word < best) best = word;
      }
      pattern.push_back(std::move(best));
    }
    std::sort(pattern.begin(), pattern.end());
    counts[pattern] += permutation_sign(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::pair<CyclePattern, long>> flat;
  for (auto& [p, c] : counts)
    if (c != 0) flat.emplace_back(p, c);
  return cache.emplace(classes, std::move(flat)).first->second;
}

}  // namespace detail

namespace {

Matrix<Rational> random_symmetric(Sampler& rng, int n) {
  Matrix<Rational> a(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rational v = rng.small_rational();
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  return a;
}

Matrix<Rational> random_rank_one(Sampler& rng, int n) {
  std::vector<Rational> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.small_rational();
  Matrix<Rational> b(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.at(i, j) = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  return b;
}

}  // namespace

EspPropsResult esp_props_check(int n, int k, int samples, Sampler& rng) {
  if (n < 1 || k < 0 || k > n) throw DomainError("esp identities need 0 <= k <= n");
  EspPropsResult r;
  r.n = n;
  r.k = k;
  r.samples = samples;
  const auto id = Matrix<Rational>::identity(n, Rational(0));
  for (int s = 0; s < samples; ++s) {
    auto a = random_symmetric(rng, n);
    auto b = random_symmetric(rng, n);
    Rational f = rng.small_rational();
    Rational lhs = sigma_k(a + b.scaled(f), k);
    Rational rhs = 0;
    for (int j = 0; j <= k; ++j) rhs += binomial(Rational(k), j) * rational_pow(f, k - j) * sigma_mixed(a, b, k, j);
    r.foil = r.foil && lhs == rhs;

    Rational expanded = 0;
    for (int j = 0; j <= k; ++j) expanded += binomial(Rational(n - k + j), j) * rational_pow(f, j) * sigma_k(a, k - j);
    r.foil_identity = r.foil_identity && sigma_k(a + id.scaled(f), k) == expanded;

    if (k >= 1) {
      auto b1 = random_rank_one(rng, n).scaled(f);
      r.foil_rank1 = r.foil_rank1 && sigma_k(a + b1, k) == sigma_k(a, k) + frobenius(newton_tensor(a, k - 1), b1);
    }
  }
  return r;
}

}  // namespace confcov
