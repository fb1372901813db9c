#pragma once

// Independent reference computations and hand-rolled generators for tests.

#include "confcov/expfield.hpp"
#include "confcov/grid_field.hpp"
#include "confcov/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using confcov::MultiPoly;
using confcov::Rational;

struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  Rational small_rational() { return confcov::make_rational(uniform_int(-5, 5), uniform_int(1, 4)); }
  std::mt19937_64 eng;
};

// Random polynomial of total degree exactly deg in the first `vars`
// variables; the first term always has full degree and a nonzero coefficient,
// so the result is never constant when deg >= 1.
inline MultiPoly random_poly(Rng& rng, int nvars, int vars, int deg, int terms, int coeff = 3) {
  MultiPoly p(nvars);
  while (p.total_degree() < deg || p.is_zero()) {
    p = MultiPoly(nvars);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(static_cast<std::size_t>(nvars), 0);
      int budget = t == 0 ? deg : rng.uniform_int(0, deg);
      for (int b = 0; b < budget; ++b) e[static_cast<std::size_t>(rng.uniform_int(0, vars - 1))]++;
      int c = rng.uniform_int(-coeff, coeff);
      if (t == 0 && c == 0) c = 1;
      p += MultiPoly::monomial(nvars, e, confcov::make_rational(c, rng.uniform_int(1, 3)));
    }
  }
  return p;
}

// Fourth-order central difference of a scalar function along one axis.
inline double fd_partial(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                         int axis, double h = 1e-3) {
  auto at = [&](double s) {
    std::vector<double> y = x;
    y[static_cast<std::size_t>(axis)] += s;
    return f(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

inline double fd_second(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                        int axis, double h = 1e-3) {
  auto at = [&](double s) {
    std::vector<double> y = x;
    y[static_cast<std::size_t>(axis)] += s;
    return f(y);
  };
  return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
}

// Laplace-Beltrami of g = e^{2 phi} delta in divergence form
//   e^{-n phi} d_i (e^{(n-2) phi} d_i f),
// by nested finite differences; independent of any expanded formula.
inline double fd_curved_laplacian(const std::function<double(const std::vector<double>&)>& phi,
                                  const std::function<double(const std::vector<double>&)>& f,
                                  const std::vector<double>& x, int n, int m, double h = 1e-3) {
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    auto flux = [&](const std::vector<double>& y) {
      return std::exp((n - 2) * phi(y)) * fd_partial(f, y, i, h);
    };
    sum += fd_partial(flux, x, i, h);
  }
  return std::exp(-n * phi(x)) * sum;
}

// A random trigonometric polynomial on the unit torus with the given band,
// as both a closure and its declared band vector.
struct TrigPoly {
  std::vector<std::vector<int>> freqs;
  std::vector<double> cos_coeff, sin_coeff;
  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t t = 0; t < freqs.size(); ++t) {
      double arg = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) arg += freqs[t][a] * x[a];
      arg *= 2.0 * std::numbers::pi;
      s += cos_coeff[t] * std::cos(arg) + sin_coeff[t] * std::sin(arg);
    }
    return s;
  }
};

inline TrigPoly random_trig(Rng& rng, int axes, int band, int terms, double amp = 1.0) {
  TrigPoly p;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> k(static_cast<std::size_t>(axes));
    for (auto& v : k) v = rng.uniform_int(-band, band);
    p.freqs.push_back(k);
    p.cos_coeff.push_back(amp * rng.uniform(-1, 1));
    p.sin_coeff.push_back(amp * rng.uniform(-1, 1));
  }
  return p;
}

inline confcov::GridField sample_trig(const confcov::TorusGridPtr& grid, const TrigPoly& p, int band,
                                      double offset = 0.0) {
  return confcov::GridField::sample(
      grid, [&](std::span<const double> x) { return offset + p(x); },
      std::vector<int>(static_cast<std::size_t>(grid->axes()), band));
}

}  // namespace oracle

namespace oracle {

// Determinant by fraction-exact Gaussian elimination.
inline Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(a[piv][c]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// sigma_k as the sum of principal k x k minors.
inline Rational sigma_by_minors(const std::vector<std::vector<Rational>>& a, int k) {
  const int n = static_cast<int>(a.size());
  if (k == 0) return 1;
  if (k > n) return 0;
  Rational total = 0;
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - k, pick.end(), 1);
  do {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (pick[static_cast<std::size_t>(i)]) idx.push_back(i);
    std::vector<std::vector<Rational>> sub(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub[r][c] = a[static_cast<std::size_t>(idx[r])][static_cast<std::size_t>(idx[c])];
    total += determinant(sub);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return total;
}

}  // namespace oracle
