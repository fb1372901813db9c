#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confcov/tensor_algebra.hpp"
#include "oracles.hpp"

using namespace confcov;

namespace {

Matrix<Rational> random_sym(oracle::Rng& rng, int n) {
  Matrix<Rational> a(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rational v = rng.small_rational();
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  return a;
}

Matrix<Rational> random_rank_one(oracle::Rng& rng, int n) {
  std::vector<Rational> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.small_rational();
  Matrix<Rational> b(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.at(i, j) = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  return b;
}

std::vector<std::vector<Rational>> to_rows(const Matrix<Rational>& a) {
  std::vector<std::vector<Rational>> r(static_cast<std::size_t>(a.dim()), std::vector<Rational>(static_cast<std::size_t>(a.dim())));
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
  return r;
}

bool equal(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("Kronecker contraction lowers the rank by one") {
  for (int n = 1; n <= 5; ++n)
    for (int k = 1; k <= 4; ++k) {
      const int free = k - 1;
      std::vector<int> up(static_cast<std::size_t>(k)), lo(static_cast<std::size_t>(k));
      std::size_t combos = 1;
      for (int i = 0; i < 2 * free; ++i) combos *= static_cast<std::size_t>(n);
      bool all_ok = true;
      for (std::size_t code = 0; code < combos; ++code) {
        std::size_t c = code;
        for (int i = 0; i < free; ++i) {
          up[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(n));
          c /= static_cast<std::size_t>(n);
          lo[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(n));
          c /= static_cast<std::size_t>(n);
        }
        int sum = 0;
        for (int s = 0; s < n; ++s) {
          up[static_cast<std::size_t>(free)] = s;
          lo[static_cast<std::size_t>(free)] = s;
          sum += gen_kronecker(up, lo, n);
        }
        int lower = free == 0 ? 1
                              : gen_kronecker(std::span<const int>(up.data(), static_cast<std::size_t>(free)),
                                              std::span<const int>(lo.data(), static_cast<std::size_t>(free)), n);
        if (sum != (n + 1 - k) * lower) all_ok = false;
      }
      CHECK_MESSAGE(all_ok, "n=" << n << " k=" << k);
    }
}

TEST_CASE("sigma_k matches principal minors and vanishes above n") {
  oracle::Rng rng(7);
  for (int n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_sym(rng, n);
      for (int k = 0; k <= n + 1; ++k) CHECK(sigma_k(a, k) == oracle::sigma_by_minors(to_rows(a), k));
    }
}

TEST_CASE("Newton tensors: recursion, contraction oracle and Cayley-Hamilton") {
  oracle::Rng rng(9);
  for (int n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 6; ++trial) {
      auto a = random_sym(rng, n);
      for (int k = 0; k <= std::min(n, 3); ++k) {
        auto t = newton_tensor(a, k);
        CHECK(is_symmetric(t));
        std::vector<Matrix<Rational>> args(static_cast<std::size_t>(k), a);
        CHECK(equal(t, newton_polarized_contraction(args, n, Rational(0))));
        CHECK(equal(t, newton_polarized(args, n, Rational(0))));
        // tr T_k = (n - k) sigma_k
        CHECK(t.trace() == Rational(n - k) * sigma_k(a, k));
      }
      auto tn = newton_tensor(a, n);
      CHECK(equal(tn, Matrix<Rational>(n, Rational(0))));
    }
}

TEST_CASE("polarized sigma: cycle expansion equals direct contraction") {
  oracle::Rng rng(13);
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= 4; ++k)
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<Matrix<Rational>> args;
        for (int i = 0; i < k; ++i) args.push_back(random_sym(rng, n));
        CHECK(sigma_polarized(args) == sigma_polarized_contraction(args));
        std::vector<Matrix<Rational>> same(static_cast<std::size_t>(k), args[0]);
        CHECK(sigma_polarized(same) == sigma_k(args[0], k));
      }
}

TEST_CASE("polarized Newton tensor equals its contraction oracle") {
  oracle::Rng rng(19);
  for (int n = 2; n <= 4; ++n)
    for (int j = 1; j <= 3; ++j) {
      std::vector<Matrix<Rational>> args;
      for (int i = 0; i < j; ++i) args.push_back(random_sym(rng, n));
      auto t = newton_polarized(args, n, Rational(0));
      CHECK(equal(t, newton_polarized_contraction(args, n, Rational(0))));
      CHECK(is_symmetric(t));
    }
}

TEST_CASE("elementary symmetric identities on 200 random inputs per (n, k)") {
  oracle::Rng rng(29);
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      bool foil = true, expand = true, rank1 = true, pairing = true;
      const int samples = 200;
      for (int trial = 0; trial < samples; ++trial) {
        auto a = random_sym(rng, n);
        auto id = Matrix<Rational>::identity(n, Rational(0));
        int j = trial % (k + 1);
        // sigma_{k,j}(A, I) = ((n-j)! j!) / ((n-k)! k!) sigma_j(A)
        if (trial < 40) {
          Rational lhs = sigma_mixed(a, id, k, j);
          Rational rhs = factorial(n - j) * factorial(j) / (factorial(n - k) * factorial(k)) * sigma_k(a, j);
          foil = foil && lhs == rhs;
          // sigma_k(A + t I) = sum_j C(n-k+j, j) t^j sigma_{k-j}(A)
          Rational t = rng.small_rational();
          Rational expanded = 0;
          for (int i = 0; i <= k; ++i)
            expanded += binomial(Rational(n - k + i), i) * rational_pow(t, i) * sigma_k(a, k - i);
          expand = expand && sigma_k(a + id.scaled(t), k) == expanded;
        }
        auto b = random_rank_one(rng, n);
        // sigma_k(A + B) = sigma_k(A) + <T_{k-1}(A), B> for rank-one B
        rank1 = rank1 && sigma_k(a + b, k) == sigma_k(a, k) + frobenius(newton_tensor(a, k - 1), b);
        if (trial < 40) {
          // <T_{k-1}(A), B> = k sigma_{k,k-1}(A, B) for any symmetric B
          auto c = random_sym(rng, n);
          pairing = pairing && frobenius(newton_tensor(a, k - 1), c) == Rational(k) * sigma_mixed(a, c, k, k - 1);
        }
      }
      CHECK_MESSAGE(foil, "foil n=" << n << " k=" << k);
      CHECK_MESSAGE(expand, "identity expansion n=" << n << " k=" << k);
      CHECK_MESSAGE(rank1, "rank one n=" << n << " k=" << k);
      CHECK_MESSAGE(pairing, "Newton pairing n=" << n << " k=" << k);
    }
}

TEST_CASE("matrix algebra over polynomials skips zero entries") {
  MultiPoly x = MultiPoly::variable(2, 0), y = MultiPoly::variable(2, 1);
  Matrix<MultiPoly> a(3, MultiPoly(2));
  a.at(0, 0) = x;
  a.at(1, 1) = y;
  a.at(2, 2) = x + y;
  CHECK(sigma_k(a, 3) == x * y * (x + y));
  CHECK(sigma_k(a, 2) == x * y + x * (x + y) + y * (x + y));
  CHECK(sigma_k(a, 4).is_zero());
}
