#include "confcov/conformal_variation.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace confcov {

namespace {

struct BasePotential {
  MultiPoly phi;
  int coordinates = 0;
};

BasePotential base_potential(const ConfBackground<ExpField>& bg) {
  const ExpField& p = bg.potential();
  if (!p.is_polynomial()) throw DomainError("background potential is not polynomial");
  int coords = p.context() ? p.context()->coordinates : bg.active();
  return {p.bucket(Rational(0)), coords};
}

// First free variable index after the coordinates and every variable in use.
int free_variable(const ConfBackground<ExpField>& bg, const MultiPoly& a, const MultiPoly& b = MultiPoly()) {
  auto base = base_potential(bg);
  int v = std::max({base.coordinates, base.phi.nvars(), a.nvars(), b.nvars()});
  if (v >= MultiPoly::kMaxVars) throw DomainError("no room for a formal parameter");
  return v;
}

// Reads the single e^{-2k psi} bucket of a rescaled invariant and re-expresses
// it on the base background: e^{-2k phi} P.
MultiPoly weighted_bucket(const ExpField& r, int k) {
  const Rational q(-2 * k);
  for (const auto& b : r.buckets())
    if (b.exponent != q)
      throw NonPolynomialJet("conformal family has a surviving exponential e^{" + b.exponent.get_str() + " psi}");
  return r.bucket(q);
}

ExpField on_base(const ConfBackground<ExpField>& bg, int k, const MultiPoly& p) {
  const ExpContextPtr& ctx = bg.potential().context();
  return bg.factor(Rational(-2 * k)) * ExpField::polynomial(ctx, p);
}

MultiPoly drop_to(const MultiPoly& p, int nvars) { return p.with_nvars(std::max(nvars, 1)); }

}  // namespace

// ---------------------------------------------------------------------------
// Jets

ConformalJet<ExpField> conformal_jet(const InvariantId& id, const MultiPoly& upsilon, const ConfBackground<ExpField>& bg) {
  const int k = id.weight_k();
  const int tv = free_variable(bg, upsilon);
  auto moved = rescale_formal(bg, upsilon, tv);
  MultiPoly p = weighted_bucket(evaluate_invariant(id, moved), k);
  ConformalJet<ExpField> jet;
  jet.invariant = id;
  jet.weight_k = k;
  if (p.is_zero()) {
    jet.c.push_back(bg.zero());
    return jet;
  }
  for (const auto& part : p.split_by(tv)) jet.c.push_back(on_base(bg, k, drop_to(part, tv)));
  return jet;
}

std::vector<Rational> jet_nodes(int count) {
  static const std::vector<Rational> all = {Rational(0),          make_rational(1, 4), make_rational(-1, 4),
                                            make_rational(1, 2),  make_rational(-1, 2), make_rational(3, 4),
                                            make_rational(-3, 4), Rational(1)};
  if (count < 1 || count > static_cast<int>(all.size())) throw DomainError("torus jets support at most 8 nodes");
  return {all.begin(), all.begin() + count};
}

std::vector<std::vector<Rational>> vandermonde_inverse(const std::vector<Rational>& nodes) {
  const std::size_t d = nodes.size();
  // [V | I] -> [I | V^{-1}] by Gauss-Jordan over the rationals.
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(2 * d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    Rational power = 1;
    for (std::size_t j = 0; j < d; ++j) {
      a[i][j] = power;
      power *= nodes[i];
    }
    a[i][d + i] = 1;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && sgn(a[piv][col]) == 0) ++piv;
    if (piv == d) throw DomainError("repeated interpolation nodes");
    std::swap(a[piv], a[col]);
    Rational inv = reciprocal(a[col][col]);
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = 0; c < 2 * d; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<std::vector<Rational>> out(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i][j] = a[i][d + j];
  return out;
}

GridField rescaled_invariant(const InvariantId& id, const GridField& upsilon, const ConfBackground<GridField>& bg,
                             double t) {
  auto moved = rescale(bg, upsilon, t);
  return evaluate_invariant(id, moved) * upsilon.exp_scaled(2.0 * id.weight_k() * t);
}

ConformalJet<GridField> conformal_jet(const InvariantId& id, const GridField& upsilon,
                                      const ConfBackground<GridField>& bg, int degree_bound) {
  if (degree_bound < 0 || degree_bound > 6) throw DomainError("torus jet degree bound must lie in [0, 6]");
  auto nodes = jet_nodes(degree_bound + 2);
  auto inv = vandermonde_inverse(nodes);
  std::vector<GridField> values;
  for (const auto& t : nodes) values.push_back(rescaled_invariant(id, upsilon, bg, t.get_d()));
  ConformalJet<GridField> jet;
  jet.invariant = id;
  jet.weight_k = id.weight_k();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    GridField cj = values[0].scaled(inv[j][0].get_d());
    for (std::size_t i = 1; i < nodes.size(); ++i) cj = cj + values[i].scaled(inv[j][i].get_d());
    jet.c.push_back(std::move(cj));
  }
  return jet;
}

ExpField rescaled_invariant(const InvariantId& id, const MultiPoly& upsilon, const ConfBackground<ExpField>& bg,
                            const Rational& t) {
  const int k = id.weight_k();
  auto moved = rescale(bg, upsilon, t);
  ExpField r = evaluate_invariant(id, moved);
  // e^{2ktY} e^{-2k(phi + tY)} = e^{-2k phi}
  return on_base(bg, k, weighted_bucket(r, k));
}

ExpField mixed_second_variation(const InvariantId& id, const MultiPoly& u, const MultiPoly& v,
                                const ConfBackground<ExpField>& bg) {
  const int k = id.weight_k();
  const int sv = free_variable(bg, u, v);
  auto first = rescale_formal(bg, u, sv);
  auto both = rescale_formal(first, v, sv + 1);
  MultiPoly p = weighted_bucket(evaluate_invariant(id, both), k);
  auto by_s = p.split_by(sv);
  if (by_s.size() < 2) return bg.zero();
  auto by_t = by_s[1].split_by(sv + 1);
  if (by_t.size() < 2) return bg.zero();
  return on_base(bg, k, drop_to(by_t[1], sv));
}

ExpField linearization(const InvariantId& id, const MultiPoly& w, const ConfBackground<ExpField>& bg) {
  auto jet = conformal_jet(id, w, bg);
  return jet.c.size() > 1 ? jet.c[1] : bg.zero();
}

GridField linearization(const InvariantId& id, const GridField& w, const ConfBackground<GridField>& bg) {
  return conformal_jet(id, w, bg, 2 * id.weight_k()).c[1];
}

LinearizationSymmetry linearization_selfadjoint_check(const InvariantId& id, const ConfBackground<GridField>& bg,
                                                      const GridField& u, const GridField& v) {
  GridField su = linearization(id, u, bg), sv = linearization(id, v, bg);
  GridField a = u * sv, b = v * su;
  auto mass = [&](const GridField& f) { return integrate(f.apply([](double x) { return std::abs(x); }), bg); };
  double scale_ref = std::max({mass(a), mass(b), 1e-300});
  LinearizationSymmetry out;
  out.asymmetry = std::abs(integrate(a, bg) - integrate(b, bg)) / scale_ref;
  GridField one = GridField::constant(u.grid(), 1.0);
  double l_max = std::max(evaluate_invariant(id, bg).max_abs(), 1e-300);
  out.s_one_max = linearization(id, one, bg).max_abs() / l_max;
  return out;
}

ExpField l1ell_apply(const InvariantId& id, int ell, const MultiPoly& u, const ConfBackground<ExpField>& bg) {
  if (ell < 1) throw DomainError("l must be positive");
  const int k = id.weight_k();
  Rational coef = Rational((bg.dim() - 2 * k) * (ell - 1)) / ell;
  ExpField uf = ExpField::polynomial(bg.potential().context(), u);
  return linearization(id, u, bg) + scale(uf * evaluate_invariant(id, bg), coef);
}

ExpField l1ell_check(const InvariantId& id, int ell, const ConfBackground<ExpField>& bg) {
  const int k = id.weight_k();
  Rational coef = Rational((bg.dim() - 2 * k) * (ell - 1)) / ell;
  auto base = base_potential(bg);
  MultiPoly one = MultiPoly::constant(std::max(base.phi.nvars(), 1), Rational(1));
  return l1ell_apply(id, ell, one, bg) - scale(evaluate_invariant(id, bg), coef);
}

ExpField recovery_check(const OperatorDescriptor& op, const InvariantCombo& target, int n, const MultiPoly& upsilon,
                        int m) {
  const int k = op.weight_k;
  if (n == 2 * k) throw DomainError("recovery needs n != 2k");
  if (target.weight_k() != k) throw DomainError("operator and invariant weights differ");
  if (upsilon.nvars() > m) throw DomainError("direction uses more than the active coordinates");
  const int tv = m;
  MultiPoly t = MultiPoly::variable(m + 1, tv);
  auto ctx = ExpContext::make(upsilon.with_nvars(m + 1) * t, m);
  auto flat = symbolic_flat(n, m, ctx);
  auto moved = symbolic_background(n, m, ctx, Rational(1));
  auto [a, b] = op.bidegree_for(n);
  std::vector<ExpField> inputs(static_cast<std::size_t>(op.arity), ExpField::exponential(ctx, a));
  ExpField lhs = scale(evaluate_invariant(target, moved).shifted(b), rational_pow(a, op.arity));
  return lhs - op.symbolic(inputs, flat);
}

// ---------------------------------------------------------------------------
// Rank

FamilySample rank_family(const RankFamily& family) {
  const int v = family.vars;
  if (v < 1 || v > 3 || family.degree < 1 || family.degree > 3)
    throw DomainError("rank family supports 1-3 variables and degree 1-3");
  if (family.coefficients.empty()) throw DomainError("empty coefficient set");
  std::vector<std::vector<int>> monos;
  std::function<void(std::vector<int>&, int, int)> gen = [&](std::vector<int>& e, int var, int left) {
    if (var == v) {
      int d = std::accumulate(e.begin(), e.end(), 0);
      if (d >= 1) monos.push_back(e);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      e[static_cast<std::size_t>(var)] = x;
      gen(e, var + 1, left - x);
    }
    e[static_cast<std::size_t>(var)] = 0;
  };
  std::vector<int> e(static_cast<std::size_t>(v), 0);
  gen(e, 0, family.degree);
  const std::size_t nm = monos.size();
  const std::size_t base = family.coefficients.size();
  double total = std::pow(static_cast<double>(base), static_cast<double>(nm));
  if (total > 5e6) throw DomainError("rank family too large to enumerate");

  auto coeffs = family.coefficients;
  std::sort(coeffs.begin(), coeffs.end());
  bool symmetric = true;
  for (int c : coeffs) symmetric = symmetric && std::binary_search(coeffs.begin(), coeffs.end(), -c);

  // Group action on monomial indices: (target index, sign).
  std::vector<std::vector<std::pair<std::size_t, int>>> actions;
  if (symmetric) {
    std::vector<int> perm(static_cast<std::size_t>(v));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int signs = 0; signs < (1 << v); ++signs)
        for (int global : {1, -1}) {
          std::vector<std::pair<std::size_t, int>> act;
          for (const auto& mono : monos) {
            std::vector<int> img(static_cast<std::size_t>(v), 0);
            int sg = global;
            for (int i = 0; i < v; ++i) {
              img[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = mono[static_cast<std::size_t>(i)];
              if ((signs >> i) & 1 && mono[static_cast<std::size_t>(i)] % 2 == 1) sg = -sg;
            }
            auto it = std::find(monos.begin(), monos.end(), img);
            act.emplace_back(static_cast<std::size_t>(it - monos.begin()), sg);
          }
          actions.push_back(std::move(act));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  FamilySample out;
  out.family_size = static_cast<std::size_t>(total) * base;
  std::vector<std::size_t> digits(nm, 0);
  std::vector<int> cv(nm), img(nm);
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(total); ++idx) {
    std::size_t r = idx;
    for (std::size_t i = 0; i < nm; ++i) {
      cv[i] = coeffs[r % base];
      r /= base;
    }
    bool keep = true;
    for (const auto& act : actions) {
      std::fill(img.begin(), img.end(), 0);
      for (std::size_t i = 0; i < nm; ++i) img[act[i].first] = act[i].second * cv[i];
      if (img < cv) {
        keep = false;
        break;
      }
    }
    if (!keep) continue;
    MultiPoly p(v);
    for (std::size_t i = 0; i < nm; ++i)
      if (cv[i] != 0) p += MultiPoly::monomial(v, monos[i], Rational(cv[i]));
    out.representatives.push_back(std::move(p));
  }
  return out;
}

RankWitness rank_witness(const InvariantId& id, int n, const std::vector<MultiPoly>& samples, int m) {
  const int k = id.weight_k();
  if (n != 2 * k) throw DomainError("rank certification runs in the critical dimension n = 2k only");
  auto ctx = ExpContext::make(MultiPoly(m), m);
  auto flat = symbolic_flat(n, m, ctx);
  RankWitness out;
  out.invariant = id;
  out.n = n;
  out.samples = samples.size();
  for (const auto& y : samples) {
    if (y.nvars() > m) throw DomainError("sample uses more than the active coordinates");
    auto jet = conformal_jet(id, y.with_nvars(m), flat);
    for (int j = static_cast<int>(jet.c.size()) - 1; j > out.witness_degree; --j)
      if (!jet.c[static_cast<std::size_t>(j)].is_zero()) {
        out.witness_degree = j;
        out.witness = y;
        break;
      }
  }
  for (int j = out.witness_degree + 1; j <= 2 * k; ++j) out.certified_zero_degrees.push_back(j);
  out.rank = out.witness_degree + 1;
  return out;
}

// ---------------------------------------------------------------------------
// Primitive

namespace {

template <int N>
double gauss_unit(const std::function<double(double)>& f) {
  return boost::math::quadrature::gauss<double, N>::integrate(f, 0.0, 1.0);
}

// Gauss-Legendre on [0, 1] exact for polynomials of the given degree.
double gauss_exact(int degree, const std::function<double(double)>& f) {
  if (degree <= 7) return gauss_unit<4>(f);
  if (degree <= 15) return gauss_unit<8>(f);
  if (degree <= 23) return gauss_unit<12>(f);
  if (degree <= 39) return gauss_unit<20>(f);
  throw DomainError("primitive path degree too high");
}

void require_critical(const InvariantId& id, int n) {
  if (n != 2 * id.weight_k()) throw DomainError("the conformal primitive needs the critical dimension n = 2k");
}

}  // namespace

double conformal_primitive_path(const InvariantId& id, const GridField& u, const ConfBackground<GridField>& bg,
                                PrimitivePath path) {
  const int k = id.weight_k();
  require_critical(id, bg.dim());
  std::function<double(double)> p, dp;
  int path_degree = 1;
  if (path == PrimitivePath::Linear) {
    p = [](double s) { return s; };
    dp = [](double) { return 1.0; };
  } else {
    p = [](double s) { return s * s * (3 - 2 * s); };
    dp = [](double s) { return 6 * s * (1 - s); };
    path_degree = 3;
  }
  // u_s' L(g_s) e^{n u_s} is e^{-2k phi}-weighted polynomial in s of degree
  // (path_degree - 1) + 2k path_degree.
  int degree = (path_degree - 1) + 2 * k * path_degree;
  auto integrand = [&](double s) {
    auto moved = rescale(bg, u, p(s));
    return integrate(u.scaled(dp(s)) * evaluate_invariant(id, moved), moved);
  };
  return gauss_exact(degree, integrand);
}

double conformal_primitive_closed(const InvariantId& id, const GridField& u, const ConfBackground<GridField>& bg) {
  require_critical(id, bg.dim());
  auto jet = conformal_jet(id, u, bg, 2 * id.weight_k());
  double total = 0.0;
  for (std::size_t j = 0; j < jet.c.size(); ++j) total += integrate(u * jet.c[j], bg) / static_cast<double>(j + 1);
  return total;
}

}  // namespace confcov
