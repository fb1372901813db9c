#pragma once

#include "confcov/operator_library.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace confcov {

// A weighted conformal family e^{2ktY} L(e^{2tY} g) that fails to be a
// polynomial in t.
class NonPolynomialJet : public DomainError {
 public:
  using DomainError::DomainError;
};

// F(t) = e^{2ktY} L(e^{2tY} g) = sum_j c_j t^j.
template <class S>
struct ConformalJet {
  InvariantId invariant;
  int weight_k = 0;
  std::vector<S> c;

  // c_j, or zero past the stored degree.
  S coeff(std::size_t j) const { return j < c.size() ? c[j] : scale(c.front(), Rational(0)); }

  S at(const Rational& t) const {
    S acc = scale(c.front(), Rational(0));
    Rational power = 1;
    for (const auto& cj : c) {
      acc = acc + scale(cj, power);
      power *= t;
    }
    return acc;
  }
};

// Exact jet on the symbolic backend. The direction Y is a polynomial in the
// coordinates of the background; t is carried as an extra formal variable.
ConformalJet<ExpField> conformal_jet(const InvariantId& id, const MultiPoly& upsilon, const ConfBackground<ExpField>& bg);

// Torus jet by exact Vandermonde inversion at degree_bound + 2 rational nodes
// drawn from {0, 1/4, -1/4, 1/2, -1/2, 3/4, -3/4, 1}; degree_bound <= 6.
ConformalJet<GridField> conformal_jet(const InvariantId& id, const GridField& upsilon,
                                      const ConfBackground<GridField>& bg, int degree_bound);

// Nodes used by the torus jet and the exact inverse of their Vandermonde matrix
// (row j gives the weights of c_j).
std::vector<Rational> jet_nodes(int count);
std::vector<std::vector<Rational>> vandermonde_inverse(const std::vector<Rational>& nodes);

// F(t) by direct rescaling, for consistency checks.
ExpField rescaled_invariant(const InvariantId& id, const MultiPoly& upsilon, const ConfBackground<ExpField>& bg,
                            const Rational& t);
GridField rescaled_invariant(const InvariantId& id, const GridField& upsilon, const ConfBackground<GridField>& bg,
                             double t);

// d^2/ds dt at 0 of e^{2k(sU+tV)} L(e^{2(sU+tV)} g); in the critical dimension
// this is L_2^2(U, V).
ExpField mixed_second_variation(const InvariantId& id, const MultiPoly& u, const MultiPoly& v,
                                const ConfBackground<ExpField>& bg);

// Conformal linearization S(w) = [t^1] e^{2ktw} L(e^{2tw} g).
ExpField linearization(const InvariantId& id, const MultiPoly& w, const ConfBackground<ExpField>& bg);
GridField linearization(const InvariantId& id, const GridField& w, const ConfBackground<GridField>& bg);

struct LinearizationSymmetry {
  double asymmetry = 0.0;     // |int u S(v) - int v S(u)| / scale
  double s_one_max = 0.0;     // max |S(1)| / max |L| on the grid
};
LinearizationSymmetry linearization_selfadjoint_check(const InvariantId& id, const ConfBackground<GridField>& bg,
                                                      const GridField& u, const GridField& v);

// L_1^l(u) = S(u) + ((n-2k)(l-1)/l) u L.
ExpField l1ell_apply(const InvariantId& id, int ell, const MultiPoly& u, const ConfBackground<ExpField>& bg);
// L_1^l(1) - ((n-2k)(l-1)/l) L; identically zero for a CVI.
ExpField l1ell_check(const InvariantId& id, int ell, const ConfBackground<ExpField>& bg);

// a^l e^{btY} L(e^{2tY} delta) - D(e^{atY}, ..., e^{atY}) on flat space with t
// formal, (a, b) the bidegree of D. Identically zero when D recovers L.
ExpField recovery_check(const OperatorDescriptor& op, const InvariantCombo& target, int n, const MultiPoly& upsilon,
                        int m);

// ---------------------------------------------------------------------------
// Rank

struct RankFamily {
  int vars = 3;
  int degree = 2;
  std::vector<int> coefficients{-1, 0, 1};
};

// All polynomials of the family with zero constant term, reduced modulo
// permutations and sign changes of the coordinates and an overall sign. Every
// excluded member is congruent to a kept one under a symmetry that preserves
// which jet coefficients vanish identically on a flat base.
struct FamilySample {
  std::vector<MultiPoly> representatives;
  std::size_t family_size = 0;  // members covered, constant terms included
};
FamilySample rank_family(const RankFamily& family);

struct RankWitness {
  InvariantId invariant;
  int n = 0;
  std::vector<int> certified_zero_degrees;  // j > witness_degree, j <= 2k, zero for every sample
  int witness_degree = -1;
  int rank = 0;
  MultiPoly witness;  // a sample with c_{witness_degree} != 0
  std::size_t samples = 0;
};
RankWitness rank_witness(const InvariantId& id, int n, const std::vector<MultiPoly>& samples, int m);

// ---------------------------------------------------------------------------
// Conformal primitive in the critical dimension

enum class PrimitivePath { Linear, Smoothstep };

// int_0^1 int u_s' L(g_s) dvol_{g_s} ds along g_s = e^{2 u_s} g.
double conformal_primitive_path(const InvariantId& id, const GridField& u, const ConfBackground<GridField>& bg,
                                PrimitivePath path);
// sum_j (1/(j+1)) int u c_j dvol_g from the torus jet.
double conformal_primitive_closed(const InvariantId& id, const GridField& u, const ConfBackground<GridField>& bg);

}  // namespace confcov
