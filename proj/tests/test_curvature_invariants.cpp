#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confcov/curvature_invariants.hpp"
#include "oracles.hpp"

using namespace confcov;

namespace {

const std::vector<InvariantId> kAll = {
    {InvariantKind::J, 1}, InvariantId::sigma(2), InvariantId::sigma(3), {InvariantKind::V3, 3},
    {InvariantKind::Q4, 2}, {InvariantKind::L1, 3}, {InvariantKind::L2, 3}, {InvariantKind::B0, 3},
    {InvariantKind::C0, 3}, {InvariantKind::I1, 3}, {InvariantKind::I2, 3}};

ConfBackground<ExpField> random_background(oracle::Rng& rng, int n, int m) {
  MultiPoly y = oracle::random_poly(rng, m, m, 2, 5, 1);
  return symbolic_background(n, m, ExpContext::make(y, m), Rational(1));
}

}  // namespace

TEST_CASE("every invariant vanishes on a flat background") {
  auto ctx = ExpContext::make(MultiPoly::variable(3, 0), 3);
  for (int n : {3, 5, 6, 7}) {
    auto flat = symbolic_flat(n, 3, ctx);
    for (const auto& id : kAll) CHECK_MESSAGE(evaluate_invariant(id, flat).is_zero(), id.name() << " n=" << n);
  }
}

TEST_CASE("Newton-route sigma_2 and sigma_3 agree with trace formulas") {
  oracle::Rng rng(201);
  for (int n : {3, 4, 5, 6, 7}) {
    auto bg = random_background(rng, n, std::min(n, 3));
    InvariantParts<ExpField> parts(bg);
    const auto& cv = parts.curvature();
    CHECK(parts.sigma2() == scale(cv.j * cv.j - cv.p_norm_sq, make_rational(1, 2)));
    ExpField tr_p3 = (cv.p_endo * cv.p_endo * cv.p_endo).trace();
    ExpField v3 = scale(cv.j * cv.j * cv.j, make_rational(1, 6)) - scale(cv.j * cv.p_norm_sq, make_rational(1, 2)) +
                  scale(tr_p3, make_rational(1, 3));
    CHECK(parts.v3() == v3);
  }
}

TEST_CASE("linear relations among the weight -6 invariants hold identically") {
  oracle::Rng rng(203);
  for (int n : {3, 5, 6, 7}) {
    auto bg = random_background(rng, n, 3);
    for (const auto& r : relations_check(bg)) CHECK_MESSAGE(r.identically_zero, r.relation << " n=" << n);
  }
}

TEST_CASE("constant rescaling scales each invariant by its weight") {
  oracle::Rng rng(207);
  const int n = 6, m = 2;
  MultiPoly y = oracle::random_poly(rng, m, m, 2, 4, 1);
  Rational c = make_rational(1, 5);
  auto base = symbolic_background(n, m, ExpContext::make(y, m), Rational(1));
  auto shifted = symbolic_background(n, m, ExpContext::make(y + MultiPoly::constant(m, c), m), Rational(1));
  for (const auto& id : kAll) {
    ExpField a = evaluate_invariant(id, base), b = evaluate_invariant(id, shifted);
    for (int p = 0; p < 4; ++p) {
      std::vector<double> x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      double expect = std::exp(-2.0 * id.weight_k() * c.get_d()) * a.evaluate(x);
      CHECK_MESSAGE(std::abs(b.evaluate(x) - expect) <= 1e-11 * std::max(1.0, std::abs(expect)), id.name());
    }
  }
}

TEST_CASE("torus and symbolic backends agree on invariants of a polynomial potential") {
  // A polynomial potential is not periodic, so compare pointwise through the
  // grid backend's spectral calculus on a trigonometric potential instead:
  // J must equal e^{-2 phi}(-Lap phi - (n-2)/2 |grad phi|^2).
  oracle::Rng rng(211);
  auto grid = TorusGrid::make({24, 24});
  auto phi_t = oracle::random_trig(rng, 2, 1, 3, 0.1);
  GridField phi = oracle::sample_trig(grid, phi_t, 1);
  const int n = 5;
  auto bg = torus_background(n, phi);
  GridField j = evaluate_invariant(InvariantId{InvariantKind::J, 1}, bg);
  GridField lap = phi.partial(0).partial(0) + phi.partial(1).partial(1);
  GridField gsq = phi.partial(0) * phi.partial(0) + phi.partial(1) * phi.partial(1);
  GridField expect = phi.exp_scaled(-2.0) * (-lap - gsq.scaled((n - 2) / 2.0));
  double err = (j - expect).max_abs();
  CHECK(err < 1e-12);
}

TEST_CASE("invariant names parse") {
  CHECK(parse_invariant("sigma2") == InvariantId::sigma(2));
  CHECK(parse_invariant("I1").kind == InvariantKind::I1);
  CHECK(parse_invariant("q4").weight_k() == 2);
  CHECK_THROWS_AS(parse_invariant("sigma0"), DomainError);
  CHECK_THROWS_AS(parse_invariant("R"), DomainError);
}
