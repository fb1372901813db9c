#pragma once

#include "confcov/multipoly.hpp"

#include <optional>

namespace confcov {

// Polynomials in (t, x): variable 0 is t, variable 1 is x.
using BivariatePoly = MultiPoly;

// 2^{-k} sigma_k(A) in dimension 2k for
//   A = (1 + 2tx - t^2 + t^2 x^2) I + 2t^2 B,  B rank one with tr B = 1 - x^2,
// expanded through sigma_k(aI + B) = sigma_k(aI) + <T_{k-1}(aI), B>.
BivariatePoly sphere_family_poly(int k);

// Same quantity from sigma_k of the diagonal matrix over (t, x).
BivariatePoly sphere_family_direct(int k);

// 2^{1-k} C(2k-1, k-1) (1 + 2tx) (1 + 2tx - t^2 + t^2 x^2)^{k-1}; the binomial
// can be overridden for negative controls.
BivariatePoly sphere_closed_form(int k, std::optional<Rational> binomial_override = std::nullopt);

struct SphereCheck {
  int k = 0;
  bool identity = false;        // foil route == closed form
  bool direct_agrees = false;   // foil route == direct sigma_k
  int t_degree = -1;
  bool leading_nonzero = false;
  bool all_lower_nonzero = false;  // every t^j, j <= 2k-1, has a nonzero x-polynomial
  bool ok() const { return identity && direct_agrees && t_degree == 2 * k - 1 && leading_nonzero && all_lower_nonzero; }
};

SphereCheck sphere_identity_check(int k, std::optional<Rational> binomial_override = std::nullopt);

}  // namespace confcov
