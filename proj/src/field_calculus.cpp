#include "confcov/field_calculus.hpp"

namespace confcov {

ConfBackground<ExpField> symbolic_background(int n, int m, ExpContextPtr ctx, const Rational& lambda) {
  if (!ctx) throw DomainError("symbolic background needs a potential context");
  if (m > ctx->coordinates) throw DomainError("more active axes than context coordinates");
  const int nv = ctx->potential.nvars();
  bool flat = sgn(lambda) == 0 || ctx->potential.is_zero();
  MultiPoly phi = flat ? MultiPoly(nv) : ctx->potential.scaled(lambda);
  ExpField potential = ExpField::polynomial(ctx, phi);
  auto factor = [ctx, lambda](const Rational& q) {
    Rational e = q * lambda;
    return ExpField::exponential(ctx, e);
  };
  return ConfBackground<ExpField>(n, m, std::move(potential), flat, factor);
}

namespace {

MultiPoly background_potential(const ConfBackground<ExpField>& bg) {
  const ExpField& phi = bg.potential();
  if (!phi.is_polynomial()) throw DomainError("background potential is not polynomial");
  int nv = phi.context() ? phi.context()->potential.nvars() : phi.nvars();
  return phi.bucket(Rational(0)).with_nvars(std::max(nv, phi.nvars()));
}

}  // namespace

ConfBackground<ExpField> rescale(const ConfBackground<ExpField>& bg, const MultiPoly& upsilon,
                                 const Rational& t) {
  MultiPoly phi = background_potential(bg);
  int nv = std::max(phi.nvars(), upsilon.nvars());
  MultiPoly next = phi.with_nvars(nv) + upsilon.with_nvars(nv).scaled(t);
  int coords = bg.potential().context() ? bg.potential().context()->coordinates : bg.active();
  return symbolic_background(bg.dim(), bg.active(), ExpContext::make(next, coords), Rational(1));
}

ConfBackground<ExpField> rescale_formal(const ConfBackground<ExpField>& bg, const MultiPoly& upsilon,
                                        int t_var) {
  MultiPoly phi = background_potential(bg);
  int nv = std::max({phi.nvars(), upsilon.nvars(), t_var + 1});
  int coords = bg.potential().context() ? bg.potential().context()->coordinates : bg.active();
  if (t_var < coords) throw DomainError("formal parameter collides with a coordinate");
  MultiPoly t = MultiPoly::variable(nv, t_var);
  MultiPoly next = phi.with_nvars(nv) + upsilon.with_nvars(nv) * t;
  return symbolic_background(bg.dim(), bg.active(), ExpContext::make(next, coords), Rational(1));
}

ConfBackground<GridField> torus_background(int n, GridField potential) {
  auto factor = [potential](const Rational& q) { return potential.exp_scaled(q.get_d()); };
  bool flat = potential.known_zero();
  int m = potential.grid()->axes();
  return ConfBackground<GridField>(n, m, potential, flat, factor);
}

ConfBackground<GridField> torus_flat(int n, TorusGridPtr grid) {
  return torus_background(n, GridField::constant(std::move(grid), 0.0));
}

ConfBackground<GridField> rescale(const ConfBackground<GridField>& bg, const GridField& upsilon, double t) {
  return torus_background(bg.dim(), bg.potential() + upsilon.scaled(t));
}

}  // namespace confcov
