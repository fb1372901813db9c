#include "confcov/sphere_witness.hpp"

#include "confcov/tensor_algebra.hpp"

namespace confcov {

namespace {

MultiPoly t_var() { return MultiPoly::variable(2, 0); }
MultiPoly x_var() { return MultiPoly::variable(2, 1); }
MultiPoly one() { return MultiPoly::constant(2, Rational(1)); }

MultiPoly power(const MultiPoly& p, int e) {
  MultiPoly r = one();
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// 1 + 2tx - t^2 + t^2 x^2
MultiPoly identity_part() {
  MultiPoly t = t_var(), x = x_var();
  return one() + (t * x).scaled(Rational(2)) - t * t + t * t * x * x;
}

// tr(2t^2 B) = 2t^2 (1 - x^2)
MultiPoly rank_one_trace() {
  MultiPoly t = t_var(), x = x_var();
  return (t * t * (one() - x * x)).scaled(Rational(2));
}

void require_k(int k) {
  if (k < 1) throw DomainError("sphere family needs k >= 1");
}

}  // namespace

BivariatePoly sphere_family_poly(int k) {
  require_k(k);
  const int n = 2 * k;
  MultiPoly a = identity_part();
  // sigma_k(aI) = C(n, k) a^k and T_{k-1}(aI) = C(n-1, k-1) a^{k-1} I.
  MultiPoly sk = power(a, k).scaled(binomial(Rational(n), k));
  MultiPoly pairing = (power(a, k - 1) * rank_one_trace()).scaled(binomial(Rational(n - 1), k - 1));
  return (sk + pairing).scaled(rational_pow(Rational(2), -k));
}

BivariatePoly sphere_family_direct(int k) {
  require_k(k);
  const int n = 2 * k;
  MultiPoly a = identity_part();
  Matrix<MultiPoly> m = Matrix<MultiPoly>::identity(n, MultiPoly(2)).times(a);
  m.at(0, 0) = a + rank_one_trace();
  return sigma_k(m, k).scaled(rational_pow(Rational(2), -k));
}

BivariatePoly sphere_closed_form(int k, std::optional<Rational> binomial_override) {
  require_k(k);
  Rational c = binomial_override ? *binomial_override : binomial(Rational(2 * k - 1), k - 1);
  MultiPoly lead = one() + (t_var() * x_var()).scaled(Rational(2));
  return (lead * power(identity_part(), k - 1)).scaled(c * rational_pow(Rational(2), 1 - k));
}

SphereCheck sphere_identity_check(int k, std::optional<Rational> binomial_override) {
  SphereCheck out;
  out.k = k;
  MultiPoly p = sphere_family_poly(k);
  out.identity = p == sphere_closed_form(k, binomial_override);
  out.direct_agrees = p == sphere_family_direct(k);
  out.t_degree = p.degree_in(0);
  auto by_t = p.split_by(0);
  out.leading_nonzero = out.t_degree >= 0 && !by_t[static_cast<std::size_t>(out.t_degree)].is_zero();
  out.all_lower_nonzero = true;
  for (int j = 0; j <= 2 * k - 1; ++j)
    if (j >= static_cast<int>(by_t.size()) || by_t[static_cast<std::size_t>(j)].is_zero()) out.all_lower_nonzero = false;
  return out;
}

}  // namespace confcov
