#pragma once

#include "confcov/curvature_invariants.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace confcov {

// ---------------------------------------------------------------------------
// Coefficients

// b_0..b_k solving ((k+j)/2) b_{j+1} + ((n-2k)(k+j+1)/(2k)) b_j = C(n-k+j, j).
struct BCoefficientTable {
  int k = 0;
  Rational n;
  std::vector<Rational> b;  // b[0] = 0
};
BCoefficientTable b_coeffs(const Rational& n, int k);

// Ovsienko-Redou coefficient a_{r,s,t}, as a rational function of n with
// common rising-factorial factors cancelled before evaluation. Throws when
// an uncancelled pole remains.
Rational or_coeff(const Rational& n, int k, int r, int s, int t);

struct OrCoefficientTable {
  int k = 0;
  Rational n;
  std::map<std::array<int, 3>, Rational> a;
};
OrCoefficientTable or_table(const Rational& n, int k);
bool or_symmetric(const OrCoefficientTable& table);
// (s+1)(N-2s-2) a_{r,s+1,t} = (r+1)(N-2r-2) a_{r+1,s,t} for r+s+t = k-1,
// N = (n+4k)/3.
bool or_tangency_check(const OrCoefficientTable& table);
bool or_tangency_check(const Rational& n, int k);

// (a, b) with a = (n-2k)/(l+1), b = (n l + 2k)/(l+1).
std::pair<Rational, Rational> bidegree(int arity, int k, const Rational& n);

// Curved coefficients of D_4 (defaults are the true values for dimension n).
struct D4Coefficients {
  Rational laplacian_mix, j_divergence, p_divergence, q4, sigma2;
  static D4Coefficients for_dimension(int n);
};

// ---------------------------------------------------------------------------
// Permutation bookkeeping

// Multiset orbit of the terms of an S_N-symmetrized expression: each key is
// the canonical form of one term and maps to the number of permutations
// producing it.
std::map<std::vector<int>, long> coalesce_permutations(int count,
                                                       const std::function<std::vector<int>(const std::vector<int>&)>& key);
// Sorted list of sorted pairs, flattened.
std::vector<int> canonical_pairs(const std::vector<int>& items, std::size_t begin, std::size_t end);

// ---------------------------------------------------------------------------
// Flat polydifferential building blocks

template <class S>
void require_flat(const ConfBackground<S>& bg, const char* what) {
  if (!bg.is_flat()) throw DomainError(std::string(what) + " is defined on flat backgrounds only");
}

// Caches products, Hessians and gradient pairings of a fixed input list.
template <class S>
class FlatPolarization {
 public:
  FlatPolarization(const std::vector<S>& inputs, const ConfBackground<S>& bg) : in_(inputs), bg_(bg) {
    require_flat(bg, "polarized flat operator");
    for (const auto& u : in_) grads_.push_back(differential(u, bg));
  }

  const S& input(int a) const { return in_[static_cast<std::size_t>(a)]; }
  const OneForm<S>& grad(int a) const { return grads_[static_cast<std::size_t>(a)]; }

  // <grad u_a, grad u_b>
  const S& pairing(int a, int b) {
    auto key = std::minmax(a, b);
    auto it = pairings_.find(key);
    if (it != pairings_.end()) return it->second;
    return pairings_.emplace(key, flat_pairing(grad(a), grad(b), bg_)).first->second;
  }

  // Hessian of u_a u_b on the active block.
  const Matrix<S>& hessian(int a, int b) {
    auto key = std::minmax(a, b);
    auto it = hessians_.find(key);
    if (it != hessians_.end()) return it->second;
    auto h = confcov::hessian(input(a) * input(b), bg_);
    Matrix<S> m(bg_.active(), bg_.zero());
    for (int i = 0; i < bg_.active(); ++i)
      for (int j = 0; j < bg_.active(); ++j) m.at(i, j) = h.at(i, j);
    return hessians_.emplace(key, std::move(m)).first->second;
  }

  // N_p(pairs) = prod <grad u, grad u'>
  S pairing_product(const std::vector<int>& flat_pairs) {
    S acc = bg_.constant(Rational(1));
    for (std::size_t i = 0; i + 1 < flat_pairs.size(); i += 2) acc = acc * pairing(flat_pairs[i], flat_pairs[i + 1]);
    return acc;
  }

  std::vector<Matrix<S>> hessian_list(const std::vector<int>& flat_pairs) {
    std::vector<Matrix<S>> hs;
    for (std::size_t i = 0; i + 1 < flat_pairs.size(); i += 2) hs.push_back(hessian(flat_pairs[i], flat_pairs[i + 1]));
    return hs;
  }

  S sigma(const std::vector<int>& flat_pairs) {
    if (flat_pairs.empty()) return bg_.constant(Rational(1));
    return sigma_polarized(hessian_list(flat_pairs));
  }

  Matrix<S> newton(const std::vector<int>& flat_pairs) {
    return newton_polarized(hessian_list(flat_pairs), bg_.active(), bg_.zero());
  }

  const ConfBackground<S>& background() const { return bg_; }

 private:
  const std::vector<S>& in_;
  const ConfBackground<S>& bg_;
  std::vector<OneForm<S>> grads_;
  std::map<std::pair<int, int>, S> pairings_;
  std::map<std::pair<int, int>, Matrix<S>> hessians_;
};

template <class S>
OneForm<S> apply_endo(const Matrix<S>& t, const OneForm<S>& w, const S& zero) {
  OneForm<S> r;
  for (int i = 0; i < t.dim(); ++i) {
    S s = zero;
    for (int j = 0; j < t.dim(); ++j) {
      if (is_zero(t(i, j))) continue;
      s = s + t(i, j) * w[j];
    }
    r.c.push_back(std::move(s));
  }
  return r;
}

namespace detail {

// Term keys of D_j^k. Term 1: {1, a, T-pairs..., -1, N-pairs...};
// term 2: {2, N-pairs..., -1, sigma-pairs..., -1, c}.
inline std::vector<int> djk_term1_key(int j, int k, const std::vector<int>& p) {
  std::vector<int> key{1, p[0]};
  auto t = canonical_pairs(p, 1, static_cast<std::size_t>(2 * j - 1));
  auto nn = canonical_pairs(p, static_cast<std::size_t>(2 * j - 1), static_cast<std::size_t>(2 * k - 1));
  key.insert(key.end(), t.begin(), t.end());
  key.push_back(-1);
  key.insert(key.end(), nn.begin(), nn.end());
  return key;
}

inline std::vector<int> djk_term2_key(int j, int k, const std::vector<int>& p) {
  std::size_t n_end = static_cast<std::size_t>(2 * k - 2 * j - 2);
  std::size_t s_end = static_cast<std::size_t>(2 * k - 2);
  std::vector<int> key{2};
  auto nn = canonical_pairs(p, 0, n_end);
  auto sg = canonical_pairs(p, n_end, s_end);
  key.insert(key.end(), nn.begin(), nn.end());
  key.push_back(-1);
  key.insert(key.end(), sg.begin(), sg.end());
  key.push_back(-1);
  key.push_back(p[s_end]);
  return key;
}

template <class S>
S djk_term(int j, int k, const std::vector<int>& key, FlatPolarization<S>& pol) {
  const auto& bg = pol.background();
  if (key[0] == 1) {
    auto sep = std::find(key.begin() + 2, key.end(), -1);
    int a = key[1];
    std::vector<int> t(key.begin() + 2, sep), nn(sep + 1, key.end());
    S nprod = pol.pairing_product(nn);
    OneForm<S> g = differential(nprod, bg);
    OneForm<S> w = j == 1 ? g : apply_endo(pol.newton(t), g, bg.zero());
    return scale(pol.input(a) * divergence(w, bg), make_rational(1, k - j));
  }
  auto sep = std::find(key.begin() + 1, key.end(), -1);
  auto sep2 = std::find(sep + 1, key.end(), -1);
  std::vector<int> nn(key.begin() + 1, sep), sg(sep + 1, sep2);
  int c = key.back();
  S coeff = pol.pairing_product(nn) * pol.sigma(sg);
  return -divergence(scale_form(pol.grad(c), coeff), bg);
}

}  // namespace detail

// D_j^k(u_1, ..., u_{2k-1}) on a flat background, fully symmetrized with
// permutation orbits coalesced.
template <class S>
S djk_apply(int j, int k, const std::vector<S>& inputs, const ConfBackground<S>& bg) {
  if (k < 1 || j < 0 || j > k - 1) throw DomainError("D_j^k needs 0 <= j <= k-1");
  if (static_cast<int>(inputs.size()) != 2 * k - 1) throw DomainError("D_j^k takes 2k-1 inputs");
  FlatPolarization<S> pol(inputs, bg);
  std::map<std::vector<int>, long> terms;
  if (j >= 1)
    terms = coalesce_permutations(2 * k - 1, [&](const std::vector<int>& p) { return detail::djk_term1_key(j, k, p); });
  auto t2 = coalesce_permutations(2 * k - 1, [&](const std::vector<int>& p) { return detail::djk_term2_key(j, k, p); });
  terms.insert(t2.begin(), t2.end());
  S total = bg.zero();
  for (const auto& [key, count] : terms) total = total + scale(detail::djk_term(j, k, key, pol), Rational(count));
  return scale(total, reciprocal(factorial(2 * k - 1)));
}

// Same operator evaluated term by term over all (2k-1)! permutations.
template <class S>
S djk_apply_unfolded(int j, int k, const std::vector<S>& inputs, const ConfBackground<S>& bg) {
  if (k < 1 || j < 0 || j > k - 1) throw DomainError("D_j^k needs 0 <= j <= k-1");
  if (static_cast<int>(inputs.size()) != 2 * k - 1) throw DomainError("D_j^k takes 2k-1 inputs");
  FlatPolarization<S> pol(inputs, bg);
  std::vector<int> p(static_cast<std::size_t>(2 * k - 1));
  std::iota(p.begin(), p.end(), 0);
  S total = bg.zero();
  do {
    if (j >= 1) total = total + detail::djk_term(j, k, detail::djk_term1_key(j, k, p), pol);
    total = total + detail::djk_term(j, k, detail::djk_term2_key(j, k, p), pol);
  } while (std::next_permutation(p.begin(), p.end()));
  return scale(total, reciprocal(factorial(2 * k - 1)));
}

// Diagonal divergence form
//   u delta(|du|^{2k-2j-2} T_{j-1}(Hess u^2) grad|du|^2) - delta(|du|^{2k-2j-2} sigma_j(Hess u^2) du).
template <class S>
S djk_diagonal(int j, int k, const S& u, const ConfBackground<S>& bg) {
  require_flat(bg, "D_j^k");
  if (k < 1 || j < 0 || j > k - 1) throw DomainError("D_j^k needs 0 <= j <= k-1");
  const int m = bg.active();
  OneForm<S> du = differential(u, bg);
  S g2 = flat_pairing(du, du, bg);
  S power = bg.constant(Rational(1));
  for (int i = 0; i < k - j - 1; ++i) power = power * g2;
  auto h2 = hessian(u * u, bg);
  Matrix<S> hm(m, bg.zero());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) hm.at(a, b) = h2.at(a, b);
  S second = -divergence(scale_form(du, power * sigma_k(hm, j)), bg);
  if (j == 0) return second;
  OneForm<S> w = apply_endo(newton_tensor(hm, j - 1), differential(g2, bg), bg.zero());
  return u * divergence(scale_form(w, power), bg) + second;
}

// u times the expanded second-order form of D_j^k(u), 1 <= j <= k-1.
template <class S>
S djk_rewrite_times_u(int j, int k, const S& u, const ConfBackground<S>& bg) {
  require_flat(bg, "D_j^k");
  if (j < 1 || j > k - 1) throw DomainError("expanded form needs 1 <= j <= k-1");
  const int m = bg.active();
  OneForm<S> du = differential(u, bg);
  S g2 = flat_pairing(du, du, bg);
  auto gpow = [&](int e) {
    S p = bg.constant(Rational(1));
    for (int i = 0; i < e; ++i) p = p * g2;
    return p;
  };
  auto h2 = hessian(u * u, bg);
  Matrix<S> hm(m, bg.zero());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) hm.at(a, b) = h2.at(a, b);
  auto t_uu = [&](int order) { return flat_pairing(du, apply_endo(newton_tensor(hm, order), du, bg.zero()), bg); };
  const int e = k - j - 1;  // |du|^{2k-2j-2} = g2^e
  S r = scale(gpow(e) * sigma_k(hm, j + 1), -Rational(2 * k - j - 1) / 2) -
        scale(gpow(e + 1) * sigma_k(hm, j), Rational(2 * k - j + 1));
  if (k - j - 1 > 0) r = r + scale(gpow(e - 1) * t_uu(j + 1), Rational(k - j - 1));
  r = r + scale(gpow(e) * t_uu(j), Rational(4 * (k - j)));
  r = r + scale(gpow(e + 1) * t_uu(j - 1), Rational(4 * (k + 1 - j)));
  return r;
}

// L_2k = -(-2)^{-k} sum_{j=0}^{k-1} ((n-2k)/(2k))^j b_{k-j} D_j^k.
template <class S>
S l2k_apply(int k, const std::vector<S>& inputs, const ConfBackground<S>& bg,
            const std::optional<std::vector<Rational>>& b_override = std::nullopt) {
  const int n = bg.dim();
  if (n == 2 * k) throw DomainError("L_2k needs n != 2k");
  std::vector<Rational> b = b_override ? *b_override : b_coeffs(Rational(n), k).b;
  Rational ratio = Rational(n - 2 * k) / (2 * k);
  S total = bg.zero();
  Rational rp = 1;
  for (int j = 0; j < k; ++j) {
    Rational c = rp * b[static_cast<std::size_t>(k - j)];
    if (sgn(c) != 0) total = total + scale(djk_apply(j, k, inputs, bg), c);
    rp *= ratio;
  }
  Rational pre = -reciprocal(rational_pow(Rational(-2), k));
  return scale(total, pre);
}

// sum_{s in S_k} delta(<du_s1, du_s2> ... <du_s(k-2), du_s(k-1)> du_sk), k odd.
template <class S>
S top_degree_apply(int k, const std::vector<S>& inputs, const ConfBackground<S>& bg) {
  if (k < 1 || k % 2 == 0) throw DomainError("top-degree operator needs odd k");
  if (static_cast<int>(inputs.size()) != k) throw DomainError("top-degree operator takes k inputs");
  FlatPolarization<S> pol(inputs, bg);
  auto orbits = coalesce_permutations(k, [&](const std::vector<int>& p) {
    auto key = canonical_pairs(p, 0, static_cast<std::size_t>(k - 1));
    key.push_back(p.back());
    return key;
  });
  S total = bg.zero();
  for (const auto& [key, count] : orbits) {
    std::vector<int> pairs(key.begin(), key.end() - 1);
    S coeff = pol.pairing_product(pairs);
    total = total + scale(divergence(scale_form(pol.grad(key.back()), coeff), bg), Rational(count));
  }
  return total;
}

// sum_{s in S_2k} sigma_j(u_s0..u_s(2j-1)) N_{k-j}(u_s(2j)..u_s(2k-1)); the
// integrand of the Dirichlet form of D_j^k.
template <class S>
S djk_energy_density(int j, int k, const std::vector<S>& inputs, const ConfBackground<S>& bg) {
  if (static_cast<int>(inputs.size()) != 2 * k) throw DomainError("energy density takes 2k inputs");
  FlatPolarization<S> pol(inputs, bg);
  auto orbits = coalesce_permutations(2 * k, [&](const std::vector<int>& p) {
    auto sg = canonical_pairs(p, 0, static_cast<std::size_t>(2 * j));
    auto nn = canonical_pairs(p, static_cast<std::size_t>(2 * j), static_cast<std::size_t>(2 * k));
    sg.push_back(-1);
    sg.insert(sg.end(), nn.begin(), nn.end());
    return sg;
  });
  S total = bg.zero();
  for (const auto& [key, count] : orbits) {
    auto sep = std::find(key.begin(), key.end(), -1);
    std::vector<int> sg(key.begin(), sep), nn(sep + 1, key.end());
    total = total + scale(pol.sigma(sg) * pol.pairing_product(nn), Rational(count));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Curved operators

template <class S>
S conformal_laplacian_apply(const S& u, const ConfBackground<S>& bg) {
  Curvature<S> cv(bg);
  return -laplacian(u, bg) + scale(cv.j * u, Rational(bg.dim() - 2) / 2);
}

// D_2(u,v) = -Lap(uv) - u Lap v - v Lap u + 4(n-2)/3 J uv.
template <class S>
S d2_apply(const S& u, const S& v, const ConfBackground<S>& bg, const SchoutenCoefficients& co = {}) {
  const int n = bg.dim();
  if (n < 2) throw DomainError("D_2 needs n >= 2");
  S uv = u * v;
  S r = -laplacian(uv, bg) - u * laplacian(v, bg) - v * laplacian(u, bg);
  if (bg.is_flat()) return r;
  Curvature<S> cv(bg, co);
  return r + scale(cv.j * uv, Rational(4 * (n - 2)) / 3);
}

template <class S>
S d4_apply(const S& u, const S& v, const ConfBackground<S>& bg, const std::optional<D4Coefficients>& override = std::nullopt) {
  const int n = bg.dim();
  if (n < 3) throw DomainError("D_4 needs n >= 3");
  D4Coefficients c = override ? *override : D4Coefficients::for_dimension(n);
  S uv = u * v;
  S lu = laplacian(u, bg), lv = laplacian(v, bg);
  S r = laplacian(laplacian(uv, bg), bg) + u * laplacian(lv, bg) + v * laplacian(lu, bg);
  r = r + scale(laplacian(u * lv + v * lu, bg) + lu * lv, c.laplacian_mix);
  if (bg.is_flat()) return r;
  InvariantParts<S> parts(bg);
  const auto& cv = parts.curvature();
  OneForm<S> duv = differential(uv, bg), du = differential(u, bg), dv = differential(v, bg);
  S jterm = divergence(scale_form(duv, cv.j), bg) + u * divergence(scale_form(dv, cv.j), bg) +
            v * divergence(scale_form(du, cv.j), bg);
  S pterm = divergence(contract(cv.p, duv, bg), bg) + u * divergence(contract(cv.p, dv, bg), bg) +
            v * divergence(contract(cv.p, du, bg), bg);
  S q4 = parts.evaluate(InvariantId{InvariantKind::Q4, 2});
  return r + scale(jterm, c.j_divergence) + scale(pterm, c.p_divergence) + scale(q4 * uv, c.q4) +
         scale(parts.sigma2() * uv, c.sigma2);
}

// ---------------------------------------------------------------------------
// Descriptors and generic checks

enum class BackgroundRequirement { FlatOnly, ConformallyFlat };

struct OperatorDescriptor {
  std::string name;
  int arity = 1;
  int weight_k = 1;
  BackgroundRequirement requirement = BackgroundRequirement::FlatOnly;
  bool covariant = true;
  std::function<ExpField(const std::vector<ExpField>&, const ConfBackground<ExpField>&)> symbolic;
  std::function<GridField(const std::vector<GridField>&, const ConfBackground<GridField>&)> numeric;

  std::pair<Rational, Rational> bidegree_for(int n) const { return bidegree(arity, weight_k, Rational(n)); }
};

template <class F>
OperatorDescriptor make_descriptor(std::string name, int arity, int k, BackgroundRequirement req, F f) {
  OperatorDescriptor d;
  d.name = std::move(name);
  d.arity = arity;
  d.weight_k = k;
  d.requirement = req;
  d.symbolic = [f](const std::vector<ExpField>& in, const ConfBackground<ExpField>& bg) { return f(in, bg); };
  d.numeric = [f](const std::vector<GridField>& in, const ConfBackground<GridField>& bg) { return f(in, bg); };
  return d;
}

OperatorDescriptor minus_laplacian_operator();
OperatorDescriptor conformal_laplacian_operator();
OperatorDescriptor djk_operator(int j, int k);
OperatorDescriptor l2k_operator(int k);
OperatorDescriptor top_degree_operator(int k);
OperatorDescriptor ovsienko_redou_operator(int order, std::optional<D4Coefficients> d4 = std::nullopt,
                                           SchoutenCoefficients schouten = {});

// op(background e^{2Y} delta; inputs) - e^{-bY} op(flat; e^{aY} inputs).
ExpField covariance_check(const OperatorDescriptor& op, const MultiPoly& upsilon, const std::vector<MultiPoly>& inputs,
                          int n, int m);

// Spread of  int u_{p0} op(u_{p1}, ...) dvol  over the transpositions (0 i),
// relative to the largest  int |u_{p0} op(...)| dvol.
double selfadjointness_check(const OperatorDescriptor& op, const std::vector<GridField>& inputs,
                             const ConfBackground<GridField>& bg);

// u (L_2k(u,...,u) - ((n-2k)/(2k) u)^{2k-1} u^{4k^2/(n-2k)} sigma_k(g_u)) for
// u = e^{cY} on flat space; identically zero when the operator is right.
ExpField power_normalization_check(int k, int n, const MultiPoly& upsilon, int m, const Rational& c,
                        const std::optional<std::vector<Rational>>& b_override = std::nullopt);

}  // namespace confcov
