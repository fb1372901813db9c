#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confcov/expfield.hpp"
#include "oracles.hpp"

#include <chrono>

using namespace confcov;

TEST_CASE("rationals stay canonical") {
  Rational a = make_rational(6, -4);
  CHECK(a.get_num() == -3);
  CHECK(a.get_den() == 2);
  CHECK(parse_rational(" 10/4 ") == make_rational(5, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(make_rational(1, 0), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(reciprocal(Rational(0)), DomainError);
  CHECK(binomial(make_rational(7, 2), 2) == make_rational(35, 8));
  CHECK(binomial(Rational(5), 2) == Rational(10));
  CHECK(rising_factorial(make_rational(1, 2), 3) == make_rational(15, 8));
}

TEST_CASE("polynomial ring axioms on random samples") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    MultiPoly a = oracle::random_poly(rng, 4, 4, 4, 6);
    MultiPoly b = oracle::random_poly(rng, 4, 4, 3, 5);
    MultiPoly c = oracle::random_poly(rng, 4, 4, 3, 5);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK(a + MultiPoly(4) == a);
    CHECK(a * MultiPoly::constant(4, 1) == a);
    // Leibniz rule.
    for (int v = 0; v < 4; ++v) CHECK((a * b).partial(v) == a.partial(v) * b + a * b.partial(v));
    // Evaluation is a ring homomorphism.
    std::vector<Rational> pt{rng.small_rational(), rng.small_rational(), rng.small_rational(), rng.small_rational()};
    CHECK((a * b).evaluate(std::span<const Rational>(pt)) ==
          a.evaluate(std::span<const Rational>(pt)) * b.evaluate(std::span<const Rational>(pt)));
    CHECK((a + b).evaluate(std::span<const Rational>(pt)) ==
          a.evaluate(std::span<const Rational>(pt)) + b.evaluate(std::span<const Rational>(pt)));
  }
}

TEST_CASE("keys order monomials graded-lex and add under multiplication") {
  std::vector<int> e1{2, 0, 1}, e2{0, 3, 0}, e3{1, 1, 1};
  auto k1 = MultiPoly::make_key(e1), k2 = MultiPoly::make_key(e2), k3 = MultiPoly::make_key(e3);
  CHECK(k1 > k2);  // same degree, larger x0 exponent first
  CHECK(k1 > k3);
  CHECK(MultiPoly::key_degree(k1 + k2) == 6);
  CHECK(MultiPoly::key_exponent(k1 + k3, 0) == 3);
  CHECK(MultiPoly::key_exponent(k1 + k3, 2) == 2);
}

TEST_CASE("zero absorbs products without touching the other operand") {
  oracle::Rng rng(3);
  MultiPoly big(5);
  for (int i = 0; i < 20; ++i) big = big + oracle::random_poly(rng, 5, 5, 10, 40);
  REQUIRE(big.size() > 200);
  auto t0 = std::chrono::steady_clock::now();
  MultiPoly z;
  for (int i = 0; i < 10000; ++i) z = MultiPoly(5) * big;
  double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
  CHECK(z.is_zero());
  CHECK(us / 10000 < 5.0);
}

TEST_CASE("split and substitute in a formal variable") {
  oracle::Rng rng(5);
  MultiPoly p = oracle::random_poly(rng, 3, 3, 5, 10);
  auto parts = p.split_by(2);
  MultiPoly t = MultiPoly::variable(3, 2);
  MultiPoly rebuilt(3), power = MultiPoly::constant(3, 1);
  for (const auto& q : parts) {
    CHECK(q.degree_in(2) <= 0);
    rebuilt += q * power;
    power = power * t;
  }
  CHECK(rebuilt == p);
  Rational v = make_rational(-2, 3);
  std::vector<Rational> pt{make_rational(1, 5), make_rational(3, 7), v};
  std::vector<Rational> pt2{make_rational(1, 5), make_rational(3, 7), Rational(0)};
  CHECK(p.substitute(2, v).evaluate(std::span<const Rational>(pt2)) == p.evaluate(std::span<const Rational>(pt)));
}

namespace {

ExpField random_exp_field(oracle::Rng& rng, const ExpContextPtr& ctx, int nvars) {
  ExpField f(ctx, nvars);
  for (int b = 0; b < 3; ++b)
    f += ExpField::exponential(ctx, make_rational(rng.uniform_int(-4, 4), rng.uniform_int(1, 2)),
                               oracle::random_poly(rng, nvars, nvars, 3, 4));
  return f;
}

}  // namespace

TEST_CASE("ExpField derivative agrees with finite differences") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    MultiPoly y = oracle::random_poly(rng, 3, 3, 2, 4, 1).scaled(make_rational(1, 4));
    auto ctx = ExpContext::make(y, 3);
    ExpField f = random_exp_field(rng, ctx, 3);
    for (int axis = 0; axis < 3; ++axis) {
      ExpField df = f.partial(axis);
      for (int p = 0; p < 3; ++p) {
        std::vector<double> x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        double exact = df.evaluate(x);
        double fd = oracle::fd_partial([&](const std::vector<double>& z) { return f.evaluate(z); }, x, axis);
        CHECK(std::abs(exact - fd) <= 1e-8 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("ExpField product rule, homomorphism and bucket bookkeeping") {
  oracle::Rng rng(23);
  MultiPoly y = oracle::random_poly(rng, 2, 2, 2, 3, 1);
  auto ctx = ExpContext::make(y, 2);
  for (int trial = 0; trial < 10; ++trial) {
    ExpField f = random_exp_field(rng, ctx, 2);
    ExpField g = random_exp_field(rng, ctx, 2);
    for (int axis = 0; axis < 2; ++axis) CHECK((f * g).partial(axis) == f.partial(axis) * g + f * g.partial(axis));
    std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(std::abs((f * g).evaluate(x) - f.evaluate(x) * g.evaluate(x)) <=
          1e-9 * (1 + std::abs(f.evaluate(x) * g.evaluate(x))));
    CHECK((f - f).is_zero());
    for (std::size_t i = 1; i < f.buckets().size(); ++i) CHECK(f.buckets()[i - 1].exponent < f.buckets()[i].exponent);
  }
  ExpField e1 = ExpField::exponential(ctx, Rational(2));
  ExpField e2 = ExpField::exponential(ctx, Rational(-2));
  CHECK(e1 * e2 == constant_like(e1, Rational(1)));
}

TEST_CASE("ExpFields over different potentials do not mix") {
  auto c1 = ExpContext::make(MultiPoly::variable(2, 0), 2);
  auto c2 = ExpContext::make(MultiPoly::variable(2, 1), 2);
  ExpField a = ExpField::exponential(c1, Rational(1));
  ExpField b = ExpField::exponential(c2, Rational(1));
  CHECK_THROWS_AS(a + b, DomainError);
  CHECK_THROWS_AS(a * b, DomainError);
  ExpField poly = ExpField::polynomial(nullptr, MultiPoly::variable(2, 1));
  CHECK_NOTHROW(a * poly);
}
