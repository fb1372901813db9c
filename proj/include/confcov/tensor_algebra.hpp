#pragma once

#include "confcov/multipoly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

namespace confcov {

class Sampler;

// Signed permutation sum  sum_s sgn(s) prod_a delta(upper[a], lower[s(a)]).
// Indices are 0-based and must be < n.
int gen_kronecker(std::span<const int> upper, std::span<const int> lower, int n);

// Sign of a permutation given as an image vector.
int permutation_sign(std::span<const int> perm);

// Dense square matrix over a commutative ring R that contains the rationals
// (Rational, double, MultiPoly, ExpField, GridField). Entries are never
// default constructed: every matrix is built from a prototype zero so that
// field-valued rings know their context or grid.
template <class R>
class Matrix {
 public:
  Matrix(int n, const R& zero) : n_(n), e_(static_cast<std::size_t>(n * n), zero) {}

  static Matrix identity(int n, const R& zero) {
    Matrix m(n, zero);
    R one = constant_like(zero, Rational(1));
    for (int i = 0; i < n; ++i) m.at(i, i) = one;
    return m;
  }

  int dim() const { return n_; }
  R& at(int i, int j) { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  const R& at(int i, int j) const { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  const R& operator()(int i, int j) const { return at(i, j); }
  R zero() const { return constant_like(e_[0], Rational(0)); }

  Matrix operator+(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
    return r;
  }
  Matrix scaled(const Rational& c) const {
    Matrix r = *this;
    for (auto& x : r.e_) x = scale(x, c);
    return r;
  }
  Matrix times(const R& c) const {
    Matrix r = *this;
    for (auto& x : r.e_) x = x * c;
    return r;
  }

  // Skips known-zero entries, which keeps block-diagonal products cheap.
  Matrix operator*(const Matrix& o) const {
    Matrix r(n_, zero());
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const R& a = at(i, k);
        if (is_zero(a)) continue;
        for (int j = 0; j < n_; ++j) {
          const R& b = o.at(k, j);
          if (is_zero(b)) continue;
          r.at(i, j) = r.at(i, j) + a * b;
        }
      }
    return r;
  }

  R trace() const {
    R s = zero();
    for (int i = 0; i < n_; ++i) s = s + at(i, i);
    return s;
  }

 private:
  int n_;
  std::vector<R> e_;
};

template <class R>
R trace_of_product(const Matrix<R>& a, const Matrix<R>& b) {
  R s = a.zero();
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k) {
      if (is_zero(a(i, k)) || is_zero(b(k, i))) continue;
      s = s + a(i, k) * b(k, i);
    }
  return s;
}

// Endomorphism that is self-adjoint for the ambient metric; stored as a
// dense matrix in an orthonormal frame, hence symmetric.
template <class R>
using SymEnd = Matrix<R>;

template <class R>
bool is_symmetric(const Matrix<R>& a) {
  if constexpr (std::is_same_v<R, Rational> || std::is_same_v<R, MultiPoly>) {
    for (int i = 0; i < a.dim(); ++i)
      for (int j = i + 1; j < a.dim(); ++j)
        if (!(a(i, j) == a(j, i))) return false;
  }
  return true;
}

// Elementary symmetric function of the eigenvalues via Newton's identities
// on power traces. sigma_0 = 1 and sigma_k = 0 for k > n.
template <class R>
R sigma_k(const Matrix<R>& a, int k) {
  const int n = a.dim();
  if (k < 0) throw DomainError("sigma_k with negative k");
  if (k == 0) return constant_like(a(0, 0), Rational(1));
  if (k > n) return a.zero();
  std::vector<R> p;  // p[i] = tr(A^{i+1})
  Matrix<R> power = a;
  p.push_back(power.trace());
  for (int i = 2; i <= k; ++i) {
    if (i == k) {
      p.push_back(trace_of_product(power, a));
    } else {
      power = power * a;
      p.push_back(power.trace());
    }
  }
  std::vector<R> s;
  s.push_back(constant_like(a(0, 0), Rational(1)));
  for (int m = 1; m <= k; ++m) {
    R acc = a.zero();
    for (int i = 1; i <= m; ++i) {
      R term = s[static_cast<std::size_t>(m - i)] * p[static_cast<std::size_t>(i - 1)];
      if (i % 2 == 1) acc = acc + term; else acc = acc - term;
    }
    s.push_back(scale(acc, make_rational(1, m)));
  }
  return s[static_cast<std::size_t>(k)];
}

// T_0 = I, T_k = sigma_k I - T_{k-1} A.
template <class R>
Matrix<R> newton_tensor(const Matrix<R>& a, int k) {
  if (k < 0) throw DomainError("newton tensor with negative k");
  Matrix<R> t = Matrix<R>::identity(a.dim(), a.zero());
  for (int j = 1; j <= k; ++j) {
    Matrix<R> next = Matrix<R>::identity(a.dim(), a.zero()).times(sigma_k(a, j));
    t = next - t * a;
  }
  return t;
}

namespace detail {
// Signed permutation counts of S_k grouped by cycle structure, when slot i
// holds argument class classes[i]. A pattern is the sorted list of cycle
// words, each word the least rotation of the classes met around the cycle.
using CyclePattern = std::vector<std::vector<int>>;
const std::vector<std::pair<CyclePattern, long>>& cycle_expansion(const std::vector<int>& classes);
}  // namespace detail

// Fully polarized sigma_k(A_1, ..., A_k), through the cycle expansion of the
// generalized Kronecker delta:
//   (1/k!) sum_{p in S_k} sgn(p) prod_{cycles c} tr(prod_{i in c} A_i).
// Equal arguments share a class, so each distinct trace is formed once.
template <class R>
R sigma_polarized(std::span<const Matrix<R>> args) {
  const int k = static_cast<int>(args.size());
  if (k == 0) throw DomainError("sigma_polarized needs at least one argument");
  R zero = args[0].zero();
  if (k > args[0].dim()) return zero;
  std::vector<int> classes(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    classes[static_cast<std::size_t>(i)] = i;
    if constexpr (std::is_same_v<R, Rational> || std::is_same_v<R, MultiPoly>) {
      const auto& a = args[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) {
        const auto& b = args[static_cast<std::size_t>(j)];
        bool same = true;
        for (int r = 0; r < a.dim() && same; ++r)
          for (int c = 0; c < a.dim() && same; ++c) same = a(r, c) == b(r, c);
        if (same) {
          classes[static_cast<std::size_t>(i)] = classes[static_cast<std::size_t>(j)];
          break;
        }
      }
    }
  }
  std::map<std::vector<int>, R> traces;
  auto trace_of = [&](const std::vector<int>& w) -> const R& {
    auto it = traces.find(w);
    if (it != traces.end()) return it->second;
    R tr = zero;
    if (w.size() == 1) {
      tr = args[static_cast<std::size_t>(w[0])].trace();
    } else {
      Matrix<R> m = args[static_cast<std::size_t>(w[0])];
      for (std::size_t i = 1; i + 1 < w.size(); ++i) m = m * args[static_cast<std::size_t>(w[i])];
      tr = trace_of_product(m, args[static_cast<std::size_t>(w.back())]);
    }
    return traces.emplace(w, std::move(tr)).first->second;
  };
  R total = zero;
  for (const auto& [pattern, coeff] : detail::cycle_expansion(classes)) {
    if (coeff == 0) continue;
    R prod = constant_like(zero, Rational(1));
    bool prod_zero = false;
    for (const auto& w : pattern) {
      const R& t = trace_of(w);
      if (is_zero(t)) {
        prod_zero = true;
        break;
      }
      prod = prod * t;
    }
    if (!prod_zero) total = total + scale(prod, Rational(coeff));
  }
  return scale(total, reciprocal(factorial(k)));
}

template <class R>
R sigma_polarized(const std::vector<Matrix<R>>& args) {
  return sigma_polarized(std::span<const Matrix<R>>(args.data(), args.size()));
}

// Direct contraction (1/k!) delta^{l_1..l_k}_{i_1..i_k} (A_1)^{i_1}_{l_1} ... .
// Cost grows like n^k k!; used as an oracle for small n and k.
template <class R>
R sigma_polarized_contraction(const std::vector<Matrix<R>>& args) {
  const int k = static_cast<int>(args.size());
  const int n = args[0].dim();
  R total = args[0].zero();
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  std::vector<int> perm(static_cast<std::size_t>(k));
  // Only ordered tuples of distinct indices contribute.
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        R prod = constant_like(total, Rational(1));
        bool zero = false;
        for (int a = 0; a < k && !zero; ++a) {
          const R& e = args[static_cast<std::size_t>(a)](idx[static_cast<std::size_t>(a)],
                                                          idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])]);
          if (is_zero(e)) zero = true;
          else prod = prod * e;
        }
        if (!zero) {
          if (permutation_sign(perm) > 0) total = total + prod; else total = total - prod;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    for (int i = 0; i < n; ++i) {
      bool used = false;
      for (int p = 0; p < pos; ++p) used = used || idx[static_cast<std::size_t>(p)] == i;
      if (used) continue;
      idx[static_cast<std::size_t>(pos)] = i;
      rec(pos + 1);
    }
  };
  rec(0);
  return scale(total, reciprocal(factorial(k)));
}

// sigma_{k,j}(A, B): A in j slots, B in k - j slots.
template <class R>
R sigma_mixed(const Matrix<R>& a, const Matrix<R>& b, int k, int j) {
  if (j < 0 || j > k) throw DomainError("sigma_mixed needs 0 <= j <= k");
  if (k == 0) return constant_like(a(0, 0), Rational(1));
  std::vector<Matrix<R>> args;
  for (int i = 0; i < j; ++i) args.push_back(a);
  for (int i = j; i < k; ++i) args.push_back(b);
  return sigma_polarized(args);
}

// Polarized Newton tensor T_j(A_1, ..., A_j):
//   T_j = sigma_j(A_1..A_j) I - (1/j) sum_i T_{j-1}(A_1..^i..A_j) A_i,
// the unique symmetric multilinear form agreeing with T_j on the diagonal.
template <class R>
Matrix<R> newton_polarized(const std::vector<Matrix<R>>& args, int n, const R& zero) {
  const int j = static_cast<int>(args.size());
  if (j == 0) return Matrix<R>::identity(n, zero);
  Matrix<R> acc(n, zero);
  for (int i = 0; i < j; ++i) {
    std::vector<Matrix<R>> rest;
    for (int r = 0; r < j; ++r)
      if (r != i) rest.push_back(args[static_cast<std::size_t>(r)]);
    acc = acc + newton_polarized(rest, n, zero) * args[static_cast<std::size_t>(i)];
  }
  Matrix<R> id = Matrix<R>::identity(n, zero);
  return id.times(sigma_polarized(args)) - acc.scaled(make_rational(1, j));
}

// Newton tensor by direct contraction
//   (T_j)^l_i = (1/j!) delta^{l l_1..l_j}_{i i_1..i_j} (A_1)^{i_1}_{l_1} ... .
template <class R>
Matrix<R> newton_polarized_contraction(const std::vector<Matrix<R>>& args, int n, const R& zero) {
  const int j = static_cast<int>(args.size());
  Matrix<R> out(n, zero);
  std::vector<int> up(static_cast<std::size_t>(j + 1)), lo(static_cast<std::size_t>(j + 1));
  std::function<void(int, int, int, R)> rec = [&](int l, int i, int pos, R prod) {
    if (pos == j) {
      int d = gen_kronecker(up, lo, n);
      if (d != 0) out.at(l, i) = out.at(l, i) + scale(prod, Rational(d));
      return;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const R& e = args[static_cast<std::size_t>(pos)](a, b);
        if (is_zero(e)) continue;
        lo[static_cast<std::size_t>(pos + 1)] = a;
        up[static_cast<std::size_t>(pos + 1)] = b;
        rec(l, i, pos + 1, prod * e);
      }
  };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i) {
      up[0] = l;
      lo[0] = i;
      rec(l, i, 0, constant_like(zero, Rational(1)));
    }
  return out.scaled(reciprocal(factorial(j)));
}

// <A, B> = tr(A B) for self-adjoint endomorphisms.
template <class R>
R frobenius(const Matrix<R>& a, const Matrix<R>& b) {
  return trace_of_product(a, b);
}

// The three expansion identities for sigma_k on `samples` random rational
// triples (A, B, f) with A, B symmetric n x n:
//   foil:           sigma_k(A + fB) = sum_j C(k, j) f^{k-j} sigma_{k,j}(A, B)
//   foil_identity:  sigma_k(A + fI) = sum_j C(n-k+j, j) f^j sigma_{k-j}(A)
//   foil_rank1:     sigma_k(A + fB) = sigma_k(A) + <T_{k-1}(A), fB>, B rank one
struct EspPropsResult {
  int n = 0, k = 0, samples = 0;
  bool foil = true, foil_identity = true, foil_rank1 = true;
};
EspPropsResult esp_props_check(int n, int k, int samples, Sampler& rng);

}  // namespace confcov
