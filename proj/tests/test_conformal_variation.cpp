#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confcov/conformal_variation.hpp"
#include "oracles.hpp"

using namespace confcov;

namespace {

const InvariantId kJ{InvariantKind::J, 1};
const InvariantId kQ4{InvariantKind::Q4, 2};
const InvariantId kV3{InvariantKind::V3, 3};
const InvariantId kI1{InvariantKind::I1, 3};
const InvariantId kI2{InvariantKind::I2, 3};
const InvariantId kL1{InvariantKind::L1, 3};
const InvariantId kL2{InvariantKind::L2, 3};

ConfBackground<ExpField> curved(oracle::Rng& rng, int n, int m) {
  MultiPoly y = oracle::random_poly(rng, m, m, 2, 3, 1).scaled(make_rational(1, 2));
  return symbolic_background(n, m, ExpContext::make(y, m), Rational(1));
}

GridField trig_field(oracle::Rng& rng, const TorusGridPtr& grid, int band, double amp, double offset = 0.0) {
  auto axes = static_cast<int>(grid->resolution.size());
  return oracle::sample_trig(grid, oracle::random_trig(rng, axes, band, 3, amp), band, offset);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("jets of constant directions are constant") {
  oracle::Rng rng(401);
  auto bg = curved(rng, 5, 2);
  for (const auto& id : {kJ, InvariantId::sigma(2), kQ4, kV3, kI1}) {
    auto jet = conformal_jet(id, MultiPoly::constant(2, make_rational(3, 2)), bg);
    CHECK(jet.c[0] == evaluate_invariant(id, bg));
    for (std::size_t j = 1; j < jet.c.size(); ++j) CHECK_MESSAGE(jet.c[j].is_zero(), id.name() << " j=" << j);
  }
}

TEST_CASE("linearization of J at a flat metric is minus the Laplacian") {
  oracle::Rng rng(403);
  auto ctx = ExpContext::make(MultiPoly(3), 3);
  for (int n : {3, 4, 6}) {
    auto flat = symbolic_flat(n, 3, ctx);
    MultiPoly w = oracle::random_poly(rng, 3, 3, 3, 5);
    CHECK(linearization(kJ, w, flat) == -laplacian(ExpField::polynomial(ctx, w), flat));
  }
}

TEST_CASE("jets reproduce direct rescaling at rational t") {
  oracle::Rng rng(409);
  auto bg = curved(rng, 5, 2);
  MultiPoly y = oracle::random_poly(rng, 2, 2, 2, 3);
  for (const auto& id : {InvariantId::sigma(2), kQ4, kV3, kL2}) {
    auto jet = conformal_jet(id, y, bg);
    CHECK(static_cast<int>(jet.c.size()) - 1 <= 2 * id.weight_k());
    for (Rational t : {make_rational(1, 3), make_rational(-2, 5), Rational(2)})
      CHECK_MESSAGE(jet.at(t) == rescaled_invariant(id, y, bg, t), id.name() << " t=" << t.get_str());
  }
}

TEST_CASE("critical-dimension jets stop below degree 2k") {
  oracle::Rng rng(419);
  auto ctx = ExpContext::make(MultiPoly(2), 2);
  for (int rep = 0; rep < 3; ++rep) {
    MultiPoly y = oracle::random_poly(rng, 2, 2, 3, 4);
    auto jet = conformal_jet(InvariantId::sigma(2), y, symbolic_flat(4, 2, ctx));
    CHECK(jet.c.size() <= 4);
    auto j3 = conformal_jet(kV3, y, symbolic_flat(6, 2, ctx));
    CHECK(j3.c.size() <= 6);
  }
}

TEST_CASE("second variation is symmetric and polarizes c_2") {
  oracle::Rng rng(421);
  auto bg = curved(rng, 4, 2);
  MultiPoly u = oracle::random_poly(rng, 2, 2, 2, 3), v = oracle::random_poly(rng, 2, 2, 2, 3);
  for (const auto& id : {InvariantId::sigma(2), kQ4}) {
    ExpField uv = mixed_second_variation(id, u, v, bg);
    CHECK(uv == mixed_second_variation(id, v, u, bg));
    auto jet = conformal_jet(id, u, bg);
    CHECK(mixed_second_variation(id, u, u, bg) == scale(jet.coeff(2), Rational(2)));
  }
}

TEST_CASE("Vandermonde inverse is exact") {
  for (int d = 1; d <= 8; ++d) {
    auto nodes = jet_nodes(d);
    auto inv = vandermonde_inverse(nodes);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Rational s = 0;
        for (int l = 0; l < d; ++l) s += inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                                         rational_pow(nodes[static_cast<std::size_t>(l)], j);
        CHECK(s == (i == j ? 1 : 0));
      }
  }
  CHECK_THROWS_AS(jet_nodes(9), DomainError);
}

TEST_CASE("torus jets interpolate the rescaled family") {
  oracle::Rng rng(431);
  auto grid = TorusGrid::make({20, 20});
  auto bg = torus_background(5, trig_field(rng, grid, 1, 0.1));
  GridField y = trig_field(rng, grid, 2, 0.3);
  for (const auto& id : {InvariantId::sigma(2), kV3}) {
    auto jet = conformal_jet(id, y, bg, 2 * id.weight_k());
    GridField direct = rescaled_invariant(id, y, bg, 0.3);
    GridField interp = jet.c[0];
    double power = 1.0;
    for (std::size_t j = 1; j < jet.c.size(); ++j) {
      power *= 0.3;
      interp = interp + jet.c[j].scaled(power);
    }
    CHECK((direct - interp).max_abs() <= 1e-10 * std::max(1.0, direct.max_abs()));
    CHECK(jet.c.back().max_abs() <= 1e-9 * std::max(1.0, direct.max_abs()));
  }
}

TEST_CASE("rank family enumeration") {
  auto one = rank_family({1, 2, {-1, 0, 1}});
  CHECK(one.family_size == 27);
  CHECK(one.representatives.size() == 4);
  auto two = rank_family({2, 2, {-1, 0, 1}});
  CHECK(two.family_size == 729);
  // Orbit sizes divide 16; the reduction keeps at least 242/16 + 1 classes.
  CHECK(two.representatives.size() >= 17);
  CHECK(two.representatives.size() < 243);
  auto lopsided = rank_family({1, 1, {0, 1}});
  CHECK(lopsided.representatives.size() == 2);
}

TEST_CASE("rank certificates on a two-variable family") {
  auto fam = rank_family({2, 2, {-1, 0, 1}});
  auto s2 = rank_witness(InvariantId::sigma(2), 4, fam.representatives, 2);
  CHECK(s2.rank == 4);
  CHECK(s2.certified_zero_degrees == std::vector<int>{4});
  auto i1 = rank_witness(kI1, 6, fam.representatives, 2);
  CHECK(i1.rank == 4);
  CHECK(i1.certified_zero_degrees == std::vector<int>{4, 5, 6});
  CHECK_THROWS_AS(rank_witness(kV3, 5, fam.representatives, 2), DomainError);
}

TEST_CASE("linearizations of invariants are self-adjoint with S(1) = 0") {
  oracle::Rng rng(433);
  auto sbg = curved(rng, 5, 2);
  for (const auto& id : {kJ, InvariantId::sigma(2), InvariantId::sigma(3), kI1, kI2, kL1, kL2})
    CHECK_MESSAGE(linearization(id, MultiPoly::constant(2, Rational(1)), sbg).is_zero(), id.name());

  // At a flat base the linearizations of quadratic invariants vanish, so the
  // base is curved.
  auto grid = TorusGrid::make({32, 32});
  auto bg = torus_background(5, trig_field(rng, grid, 1, 0.1));
  GridField u = trig_field(rng, grid, 1, 0.2), v = trig_field(rng, grid, 1, 0.2);
  for (const auto& id : {kJ, InvariantId::sigma(2), InvariantId::sigma(3), kQ4, kI1, kI2, kL1, kL2}) {
    auto r = linearization_selfadjoint_check(id, bg, u, v);
    CHECK_MESSAGE(r.asymmetry < 1e-7, id.name() << " " << r.asymmetry);
    CHECK_MESSAGE(r.s_one_max < 1e-10, id.name() << " " << r.s_one_max);
  }
  // J^2 is not variational.
  auto bad = linearization_selfadjoint_check(parse_invariant("J2"), bg, u, v);
  CHECK(bad.asymmetry > 1e-3);
}

TEST_CASE("L_1^l at the constant function") {
  oracle::Rng rng(439);
  for (int n : {4, 5, 7}) {
    auto bg = curved(rng, n, 2);
    for (int ell : {1, 2, 3}) CHECK(l1ell_check(InvariantId::sigma(2), ell, bg).is_zero());
    ExpField one = l1ell_apply(InvariantId::sigma(2), 3, MultiPoly::constant(2, Rational(1)), bg);
    if (n == 4) CHECK(one.is_zero());
    if (n == 5)
      CHECK(one == scale(evaluate_invariant(InvariantId::sigma(2), bg), make_rational(2, 3)));
  }
}

TEST_CASE("operators recover their invariants") {
  oracle::Rng rng(443);
  for (int n : {3, 5, 6}) {
    MultiPoly y = oracle::random_poly(rng, 2, 2, 2, 3);
    InvariantCombo target{{{Rational(12) / (n - 2), kJ}}};
    CHECK(recovery_check(ovsienko_redou_operator(2), target, n, y, 2).is_zero());
    CHECK(recovery_check(conformal_laplacian_operator(), InvariantCombo{{{Rational(1), kJ}}}, n, y, 2).is_zero());
    InvariantCombo wrong{{{Rational(11) / (n - 2), kJ}}};
    CHECK_FALSE(recovery_check(ovsienko_redou_operator(2), wrong, n, y, 2).is_zero());
  }
  for (int n : {5, 6, 7}) {
    MultiPoly y = oracle::random_poly(rng, 2, 2, 2, 3);
    CHECK(recovery_check(l2k_operator(2), InvariantCombo{{{Rational(1), InvariantId::sigma(2)}}}, n, y, 2).is_zero());
    auto c = D4Coefficients::for_dimension(n);
    Rational a = Rational(n - 4) / 3;
    InvariantCombo d4_target{{{c.q4 / (a * a), kQ4}, {c.sigma2 / (a * a), InvariantId::sigma(2)}}};
    CHECK(recovery_check(ovsienko_redou_operator(4), d4_target, n, y, 2).is_zero());
  }
  MultiPoly zero(2);
  CHECK(recovery_check(l2k_operator(2), InvariantCombo{{{Rational(1), InvariantId::sigma(2)}}}, 5, zero, 2).is_zero());
}

TEST_CASE("conformal primitive is path independent in the critical dimension") {
  oracle::Rng rng(449);
  {
    auto grid = TorusGrid::make({16, 16});
    auto bg = torus_background(4, trig_field(rng, grid, 1, 0.1));
    GridField u = trig_field(rng, grid, 1, 0.4);
    double lin = conformal_primitive_path(InvariantId::sigma(2), u, bg, PrimitivePath::Linear);
    double smooth = conformal_primitive_path(InvariantId::sigma(2), u, bg, PrimitivePath::Smoothstep);
    double closed = conformal_primitive_closed(InvariantId::sigma(2), u, bg);
    CHECK(rel(lin, smooth) < 1e-8);
    CHECK(rel(lin, closed) < 1e-8);
    CHECK(std::abs(lin) > 1e-6);
    GridField zero = GridField::constant(grid, 0.0);
    CHECK(conformal_primitive_path(InvariantId::sigma(2), zero, bg, PrimitivePath::Linear) == 0.0);
    CHECK(conformal_primitive_closed(InvariantId::sigma(2), zero, bg) == 0.0);
    auto bad = torus_background(5, trig_field(rng, grid, 1, 0.1));
    CHECK_THROWS_AS(conformal_primitive_closed(InvariantId::sigma(2), u, bad), DomainError);
  }
  {
    auto grid = TorusGrid::make({12, 12, 12});
    auto bg = torus_background(6, trig_field(rng, grid, 1, 0.1));
    GridField u = trig_field(rng, grid, 1, 0.4);
    double lin = conformal_primitive_path(kV3, u, bg, PrimitivePath::Linear);
    double smooth = conformal_primitive_path(kV3, u, bg, PrimitivePath::Smoothstep);
    double closed = conformal_primitive_closed(kV3, u, bg);
    CHECK_MESSAGE(rel(lin, smooth) < 1e-6, lin << " " << smooth);
    CHECK_MESSAGE(rel(lin, closed) < 1e-6, lin << " " << closed);
  }
}
