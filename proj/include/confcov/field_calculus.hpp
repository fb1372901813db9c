#pragma once

#include "confcov/expfield.hpp"
#include "confcov/grid_field.hpp"
#include "confcov/tensor_algebra.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace confcov {

// Conformally flat background g = e^{2 phi} delta on R^n or T^n whose
// potential depends only on the first m ("active") coordinates. The scalar
// type S selects the backend: ExpField (exact, symbolic) or GridField
// (spectral, torus). Raising an index costs a factor e^{-2 phi}.
template <class S>
class ConfBackground {
 public:
  using FactorFn = std::function<S(const Rational&)>;

  ConfBackground(int n, int m, S potential, bool flat, FactorFn factor)
      : n_(n), m_(m), flat_(flat), potential_(std::move(potential)), factor_(std::move(factor)) {
    if (m < 1 || n < m) throw DomainError("background needs 1 <= active axes <= n");
    for (int i = 0; i < m_; ++i) grad_.push_back(partial(potential_, i));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) hess_.push_back(j < i ? hess(j, i) : partial(grad_[static_cast<std::size_t>(i)], j));
    inv_metric_ = flat_ ? constant(Rational(1)) : factor_(Rational(-2));
  }

  int dim() const { return n_; }
  int active() const { return m_; }
  bool is_flat() const { return flat_; }
  const S& potential() const { return potential_; }
  const S& grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
  const S& hess(int i, int j) const { return hess_[static_cast<std::size_t>(i * m_ + j)]; }
  // e^{-2 phi}
  const S& inv_metric() const { return inv_metric_; }
  // e^{q phi}
  S factor(const Rational& q) const {
    if (flat_ || sgn(q) == 0) return constant(Rational(1));
    return factor_(q);
  }
  S constant(const Rational& c) const { return constant_like(potential_, c); }
  S zero() const { return constant(Rational(0)); }

 private:
  int n_;
  int m_;
  bool flat_;
  S potential_;
  FactorFn factor_;
  std::vector<S> grad_;
  std::vector<S> hess_;
  S inv_metric_;
};

// Symbolic background with phi = lambda * (context potential).
ConfBackground<ExpField> symbolic_background(int n, int m, ExpContextPtr ctx, const Rational& lambda);
inline ConfBackground<ExpField> symbolic_flat(int n, int m, ExpContextPtr ctx) {
  return symbolic_background(n, m, std::move(ctx), Rational(0));
}
// Fresh context with potential phi + t * upsilon (upsilon over the same variables).
ConfBackground<ExpField> rescale(const ConfBackground<ExpField>& bg, const MultiPoly& upsilon,
                                 const Rational& t);
// Same with a formal parameter: potential phi + x_{t_var} * upsilon.
ConfBackground<ExpField> rescale_formal(const ConfBackground<ExpField>& bg, const MultiPoly& upsilon,
                                        int t_var);

ConfBackground<GridField> torus_background(int n, GridField potential);
ConfBackground<GridField> torus_flat(int n, TorusGridPtr grid);
ConfBackground<GridField> rescale(const ConfBackground<GridField>& bg, const GridField& upsilon, double t);

// One-form with components along the active axes; components along the
// inactive axes vanish for every form built here.
template <class S>
struct OneForm {
  std::vector<S> c;
  const S& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

// Symmetric (0,2)-tensor: an m x m active block plus a multiple of the
// identity on the n - m inactive directions.
template <class S>
struct Sym2Field {
  int n = 0;
  int m = 0;
  std::vector<S> block;
  S tail;
  const S& at(int i, int j) const { return block[static_cast<std::size_t>(i * m + j)]; }
  S& at(int i, int j) { return block[static_cast<std::size_t>(i * m + j)]; }
};

template <class S>
OneForm<S> differential(const S& f, const ConfBackground<S>& bg) {
  OneForm<S> w;
  for (int i = 0; i < bg.active(); ++i) w.c.push_back(partial(f, i));
  return w;
}

template <class S>
OneForm<S> scale_form(const OneForm<S>& w, const S& f) {
  OneForm<S> r;
  for (const auto& x : w.c) r.c.push_back(x * f);
  return r;
}

template <class S>
OneForm<S> add_forms(const OneForm<S>& a, const OneForm<S>& b) {
  OneForm<S> r;
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c.push_back(a.c[i] + b.c[i]);
  return r;
}

// sum_i a_i b_i (flat pairing of components).
template <class S>
S flat_pairing(const OneForm<S>& a, const OneForm<S>& b, const ConfBackground<S>& bg) {
  S s = bg.zero();
  for (std::size_t i = 0; i < a.c.size(); ++i) s = s + a.c[i] * b.c[i];
  return s;
}

// g^{-1}(a, b)
template <class S>
S inner(const OneForm<S>& a, const OneForm<S>& b, const ConfBackground<S>& bg) {
  S s = flat_pairing(a, b, bg);
  return bg.is_flat() ? s : bg.inv_metric() * s;
}

// Divergence delta_g w = e^{-2 phi} (d_i w_i + (n-2) phi_i w_i), sign chosen
// so that delta(du) = Laplacian(u).
template <class S>
S divergence(const OneForm<S>& w, const ConfBackground<S>& bg) {
  S s = bg.zero();
  for (int i = 0; i < bg.active(); ++i) s = s + partial(w[i], i);
  if (bg.is_flat()) return s;
  S drift = bg.zero();
  for (int i = 0; i < bg.active(); ++i) drift = drift + bg.grad(i) * w[i];
  s = s + scale(drift, Rational(bg.dim() - 2));
  return bg.inv_metric() * s;
}

// Laplace-Beltrami operator (trace of the Hessian; nonpositive spectrum).
template <class S>
S laplacian(const S& f, const ConfBackground<S>& bg) {
  return divergence(differential(f, bg), bg);
}

// Levi-Civita Hessian of f as a (0,2)-tensor.
template <class S>
Sym2Field<S> hessian(const S& f, const ConfBackground<S>& bg) {
  const int m = bg.active();
  Sym2Field<S> h{bg.dim(), m, {}, bg.zero()};
  OneForm<S> df = differential(f, bg);
  std::vector<S> second;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) second.push_back(j < i ? second[static_cast<std::size_t>(j * m + i)] : partial(df[i], j));
  if (bg.is_flat()) {
    h.block = std::move(second);
    return h;
  }
  S dphi_df = bg.zero();
  for (int k = 0; k < m; ++k) dphi_df = dphi_df + bg.grad(k) * df[k];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      S v = second[static_cast<std::size_t>(i * m + j)] - bg.grad(i) * df[j] - bg.grad(j) * df[i];
      if (i == j) v = v + dphi_df;
      h.block.push_back(std::move(v));
    }
  h.tail = dphi_df;
  return h;
}

// Coefficients of  P = a Hess(phi) + b dphi (x) dphi + c |dphi|^2 delta  for the
// conformally flat Schouten tensor; the defaults are the true values.
struct SchoutenCoefficients {
  Rational hess = -1;
  Rational outer = 1;
  Rational trace = make_rational(-1, 2);
};

template <class S>
Sym2Field<S> schouten(const ConfBackground<S>& bg, const SchoutenCoefficients& co = {}) {
  const int m = bg.active();
  Sym2Field<S> p{bg.dim(), m, {}, bg.zero()};
  if (bg.is_flat()) {
    p.block.assign(static_cast<std::size_t>(m * m), bg.zero());
    return p;
  }
  S grad_sq = bg.zero();
  for (int k = 0; k < m; ++k) grad_sq = grad_sq + bg.grad(k) * bg.grad(k);
  S diag = scale(grad_sq, co.trace);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      S v = scale(bg.hess(i, j), co.hess) + scale(bg.grad(i) * bg.grad(j), co.outer);
      if (i == j) v = v + diag;
      p.block.push_back(std::move(v));
    }
  p.tail = diag;
  return p;
}

// g^{-1} T as an n x n endomorphism in an orthonormal frame.
template <class S>
Matrix<S> raise(const Sym2Field<S>& t, const ConfBackground<S>& bg) {
  Matrix<S> e(t.n, bg.zero());
  const S& w = bg.inv_metric();
  for (int i = 0; i < t.m; ++i)
    for (int j = 0; j < t.m; ++j) e.at(i, j) = bg.is_flat() ? t.at(i, j) : w * t.at(i, j);
  S tail = bg.is_flat() ? t.tail : w * t.tail;
  for (int i = t.m; i < t.n; ++i) e.at(i, i) = tail;
  return e;
}

template <class S>
S trace_g(const Sym2Field<S>& t, const ConfBackground<S>& bg) {
  S s = bg.zero();
  for (int i = 0; i < t.m; ++i) s = s + t.at(i, i);
  s = s + scale(t.tail, Rational(t.n - t.m));
  return bg.is_flat() ? s : bg.inv_metric() * s;
}

template <class S>
S norm_sq_g(const Sym2Field<S>& t, const ConfBackground<S>& bg) {
  S s = bg.zero();
  for (int i = 0; i < t.m; ++i)
    for (int j = 0; j < t.m; ++j) s = s + t.at(i, j) * t.at(j, i);
  s = s + scale(t.tail * t.tail, Rational(t.n - t.m));
  return bg.is_flat() ? s : bg.factor(Rational(-4)) * s;
}

// One-form T(grad w): (T_ij g^{jk} w_k).
template <class S>
OneForm<S> contract(const Sym2Field<S>& t, const OneForm<S>& w, const ConfBackground<S>& bg) {
  OneForm<S> r;
  for (int i = 0; i < t.m; ++i) {
    S s = bg.zero();
    for (int j = 0; j < t.m; ++j) s = s + t.at(i, j) * w[j];
    r.c.push_back(bg.is_flat() ? s : bg.inv_metric() * s);
  }
  return r;
}

// Riemannian volume integral over the unit torus.
inline double integrate(const GridField& f, const ConfBackground<GridField>& bg) {
  if (bg.is_flat()) return f.integrate();
  return (f * bg.factor(Rational(bg.dim()))).integrate();
}

// Bundle of background-derived curvature used by several invariants.
template <class S>
struct Curvature {
  Sym2Field<S> p;
  S j;
  S p_norm_sq;
  Matrix<S> p_endo;

  explicit Curvature(const ConfBackground<S>& bg, const SchoutenCoefficients& co = {})
      : p(schouten(bg, co)), j(trace_g(p, bg)), p_norm_sq(norm_sq_g(p, bg)), p_endo(raise(p, bg)) {}
};

}  // namespace confcov
