#include "confcov/operator_library.hpp"

#include <cmath>

namespace confcov {

BCoefficientTable b_coeffs(const Rational& n, int k) {
  if (k < 1) throw DomainError("b coefficients need k >= 1");
  BCoefficientTable t;
  t.k = k;
  t.n = n;
  t.b.assign(static_cast<std::size_t>(k + 1), Rational(0));
  const Rational drift = (n - 2 * k) / Rational(2 * k);
  for (int j = 0; j < k; ++j) {
    Rational rhs = binomial(n - k + j, j) - drift * (k + j + 1) * t.b[static_cast<std::size_t>(j)];
    t.b[static_cast<std::size_t>(j + 1)] = rhs * 2 / Rational(k + j);
  }
  return t;
}

Rational or_coeff(const Rational& n, int k, int r, int s, int t) {
  if (k < 0 || r < 0 || s < 0 || t < 0 || r + s + t != k) throw DomainError("a_{r,s,t} needs r+s+t = k");
  const Rational m6 = (n - 2 * k) / 6;
  // Factor (m6 + i) multiplicities: numerator i in [0, s+t), denominators
  // i in [r+t, k) and [r+s, k).
  std::vector<int> mult(static_cast<std::size_t>(k + 1), 0);
  for (int i = 0; i < s + t; ++i) ++mult[static_cast<std::size_t>(i)];
  for (int i = r + t; i < k; ++i) --mult[static_cast<std::size_t>(i)];
  for (int i = r + s; i < k; ++i) --mult[static_cast<std::size_t>(i)];
  Rational value = factorial(k) / (factorial(r) * factorial(s) * factorial(t));
  for (int i = 0; i <= k; ++i) {
    Rational f = m6 + i;
    int e = mult[static_cast<std::size_t>(i)];
    if (e < 0 && sgn(f) == 0)
      throw DomainError("a_{r,s,t} has a pole at n = " + n.get_str() + " (k = " + std::to_string(k) + ")");
    value *= rational_pow(f, e);
  }
  return value;
}

OrCoefficientTable or_table(const Rational& n, int k) {
  OrCoefficientTable tab;
  tab.k = k;
  tab.n = n;
  for (int r = 0; r <= k; ++r)
    for (int s = 0; s + r <= k; ++s) tab.a[{r, s, k - r - s}] = or_coeff(n, k, r, s, k - r - s);
  return tab;
}

bool or_symmetric(const OrCoefficientTable& table) {
  for (const auto& [idx, v] : table.a) {
    std::array<int, 3> p = idx;
    std::sort(p.begin(), p.end());
    do {
      auto it = table.a.find(p);
      if (it == table.a.end() || it->second != v) return false;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return true;
}

bool or_tangency_check(const OrCoefficientTable& table) {
  const int k = table.k;
  const Rational big_n = (table.n + 4 * k) / 3;
  for (int r = 0; r <= k - 1; ++r)
    for (int s = 0; r + s <= k - 1; ++s) {
      int t = k - 1 - r - s;
      Rational lhs = Rational(s + 1) * (big_n - 2 * s - 2) * table.a.at({r, s + 1, t});
      Rational rhs = Rational(r + 1) * (big_n - 2 * r - 2) * table.a.at({r + 1, s, t});
      if (lhs != rhs) return false;
    }
  return true;
}

bool or_tangency_check(const Rational& n, int k) { return or_tangency_check(or_table(n, k)); }

std::pair<Rational, Rational> bidegree(int arity, int k, const Rational& n) {
  if (arity < 1) throw DomainError("bidegree needs arity >= 1");
  Rational a = (n - 2 * k) / (arity + 1);
  Rational b = (n * arity + 2 * k) / (arity + 1);
  return {a, b};
}

D4Coefficients D4Coefficients::for_dimension(int nn) {
  const Rational n(nn);
  D4Coefficients c;
  c.laplacian_mix = Rational(2) * (n - 4) / (n + 2);
  c.j_divergence = -Rational(2) * (4 * n * n - 17 * n + 22) / (Rational(3) * (n + 2));
  c.p_divergence = Rational(2) * (n + 2) / 3;
  c.q4 = Rational(8) * (n - 1) * (n - 4) / (Rational(3) * (n + 2));
  c.sigma2 = Rational(8) * (n - 4) * (n - 4) * (n - 4) / (Rational(9) * (n + 2));
  return c;
}

std::map<std::vector<int>, long> coalesce_permutations(
    int count, const std::function<std::vector<int>(const std::vector<int>&)>& key) {
  std::map<std::vector<int>, long> orbits;
  std::vector<int> p(static_cast<std::size_t>(count));
  std::iota(p.begin(), p.end(), 0);
  do {
    ++orbits[key(p)];
  } while (std::next_permutation(p.begin(), p.end()));
  return orbits;
}

std::vector<int> canonical_pairs(const std::vector<int>& items, std::size_t begin, std::size_t end) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = begin; i + 1 < end + 1 && i + 1 <= end - 1 + 1 && i < end; i += 2)
    pairs.emplace_back(std::min(items[i], items[i + 1]), std::max(items[i], items[i + 1]));
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> flat;
  for (auto [a, b] : pairs) {
    flat.push_back(a);
    flat.push_back(b);
  }
  return flat;
}

OperatorDescriptor minus_laplacian_operator() {
  auto d = make_descriptor("minus_laplacian", 1, 1, BackgroundRequirement::ConformallyFlat,
                           [](const auto& in, const auto& bg) { return -laplacian(in[0], bg); });
  d.covariant = false;
  return d;
}

OperatorDescriptor conformal_laplacian_operator() {
  return make_descriptor("conformal_laplacian", 1, 1, BackgroundRequirement::ConformallyFlat,
                         [](const auto& in, const auto& bg) { return conformal_laplacian_apply(in[0], bg); });
}

OperatorDescriptor djk_operator(int j, int k) {
  return make_descriptor("D_" + std::to_string(j) + "^" + std::to_string(k), 2 * k - 1, k,
                         BackgroundRequirement::FlatOnly,
                         [j, k](const auto& in, const auto& bg) { return djk_apply(j, k, in, bg); });
}

OperatorDescriptor l2k_operator(int k) {
  return make_descriptor("L_" + std::to_string(2 * k), 2 * k - 1, k, BackgroundRequirement::FlatOnly,
                         [k](const auto& in, const auto& bg) { return l2k_apply(k, in, bg); });
}

OperatorDescriptor top_degree_operator(int k) {
  if (k < 1 || k % 2 == 0) throw DomainError("top-degree operator needs odd k");
  return make_descriptor("top_degree_" + std::to_string(k), k, (k + 1) / 2, BackgroundRequirement::FlatOnly,
                         [k](const auto& in, const auto& bg) { return top_degree_apply(k, in, bg); });
}

OperatorDescriptor ovsienko_redou_operator(int order, std::optional<D4Coefficients> d4, SchoutenCoefficients schouten) {
  if (order == 2)
    return make_descriptor("D_2", 2, 1, BackgroundRequirement::ConformallyFlat,
                           [schouten](const auto& in, const auto& bg) { return d2_apply(in[0], in[1], bg, schouten); });
  if (order == 4)
    return make_descriptor("D_4", 2, 2, BackgroundRequirement::ConformallyFlat,
                           [d4](const auto& in, const auto& bg) { return d4_apply(in[0], in[1], bg, d4); });
  throw DomainError("curved Ovsienko-Redou operators are available for orders 2 and 4");
}

ExpField covariance_check(const OperatorDescriptor& op, const MultiPoly& upsilon, const std::vector<MultiPoly>& inputs,
                          int n, int m) {
  if (op.requirement == BackgroundRequirement::FlatOnly)
    throw DomainError(op.name + " is flat-only; a covariance check is meaningless");
  if (static_cast<int>(inputs.size()) != op.arity) throw DomainError("wrong number of inputs for " + op.name);
  int nv = upsilon.nvars();
  for (const auto& u : inputs) nv = std::max(nv, u.nvars());
  auto ctx = ExpContext::make(upsilon.with_nvars(nv), m);
  auto curved = symbolic_background(n, m, ctx, Rational(1));
  auto flat = symbolic_flat(n, m, ctx);
  auto [a, b] = op.bidegree_for(n);
  std::vector<ExpField> plain, weighted;
  for (const auto& u : inputs) {
    plain.push_back(ExpField::polynomial(ctx, u.with_nvars(nv)));
    weighted.push_back(ExpField::exponential(ctx, a, u.with_nvars(nv)));
  }
  ExpField lhs = op.symbolic(plain, curved);
  ExpField rhs = op.symbolic(weighted, flat).shifted(-b);
  return lhs - rhs;
}

double selfadjointness_check(const OperatorDescriptor& op, const std::vector<GridField>& inputs,
                             const ConfBackground<GridField>& bg) {
  if (static_cast<int>(inputs.size()) != op.arity + 1) throw DomainError("self-adjointness needs arity + 1 inputs");
  std::vector<double> values;
  double scale_ref = 0.0;
  for (int i = 0; i <= op.arity; ++i) {
    std::vector<GridField> perm = inputs;
    std::swap(perm[0], perm[static_cast<std::size_t>(i)]);
    std::vector<GridField> args(perm.begin() + 1, perm.end());
    GridField density = perm[0] * op.numeric(args, bg);
    values.push_back(integrate(density, bg));
    // The integrals themselves can cancel to ~0; the mass of |density| cannot.
    scale_ref = std::max(scale_ref, integrate(density.apply([](double x) { return std::abs(x); }), bg));
  }
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (scale_ref == 0.0) return 0.0;
  return (hi - lo) / scale_ref;
}

ExpField power_normalization_check(int k, int n, const MultiPoly& upsilon, int m, const Rational& c,
                        const std::optional<std::vector<Rational>>& b_override) {
  if (n == 2 * k) throw DomainError("power normalization needs n != 2k");
  auto ctx = ExpContext::make(upsilon, m);
  auto flat = symbolic_flat(n, m, ctx);
  ExpField u = ExpField::exponential(ctx, c);
  std::vector<ExpField> inputs(static_cast<std::size_t>(2 * k - 1), u);
  ExpField lhs = l2k_apply(k, inputs, flat, b_override);
  const Rational nk(n - 2 * k);
  Rational lambda = Rational(2 * k) * c / nk;
  auto gu = symbolic_background(n, m, ctx, lambda);
  ExpField sk = evaluate_invariant(InvariantId::sigma(k), gu);
  Rational power = Rational(2 * k - 1) + Rational(4 * k * k) / nk;
  Rational pre = rational_pow(nk / (2 * k), 2 * k - 1);
  ExpField rhs = scale(sk.shifted(power * c), pre);
  return u * (lhs - rhs);
}

}  // namespace confcov
