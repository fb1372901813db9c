#pragma once

#include "confcov/field_calculus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace confcov {

// JSquared (J^2) is not conformally variational; it serves as a control.
enum class InvariantKind { J, SigmaK, V3, Q4, L1, L2, B0, C0, I1, I2, JSquared };

struct InvariantId {
  InvariantKind kind = InvariantKind::J;
  int k = 1;  // order for SigmaK

  static InvariantId sigma(int k) { return {InvariantKind::SigmaK, k}; }
  // Homogeneity: L(c^2 g) = c^{-2 weight_k} L(g).
  int weight_k() const;
  std::string name() const;
  bool operator==(const InvariantId&) const = default;
};

// Accepts J, Q4, v3, sigma1..sigma9, L1, L2, B0, C0, I1, I2, J2 (case-insensitive).
InvariantId parse_invariant(const std::string& name);

// Linear combination of invariants of the same weight.
struct InvariantCombo {
  std::vector<std::pair<Rational, InvariantId>> terms;
  int weight_k() const;
  std::string name() const;
};

// Lazily evaluated building blocks on one background. All Laplacians and
// divergences are taken in the background metric.
template <class S>
class InvariantParts {
 public:
  explicit InvariantParts(const ConfBackground<S>& bg, const SchoutenCoefficients& co = {})
      : bg_(bg), cv_(bg, co), n_(bg.dim()) {}

  const ConfBackground<S>& background() const { return bg_; }
  const Curvature<S>& curvature() const { return cv_; }
  const S& j() const { return cv_.j; }
  const S& p_norm_sq() const { return cv_.p_norm_sq; }

  const S& j_sq() { return lazy(j_sq_, [&] { return cv_.j * cv_.j; }); }
  const S& sigma2() { return lazy(sigma2_, [&] { return sigma_k(cv_.p_endo, 2); }); }
  const S& v3() { return lazy(v3_, [&] { return sigma_k(cv_.p_endo, 3); }); }
  const OneForm<S>& dj() { return lazy(dj_, [&] { return differential(cv_.j, bg_); }); }
  const S& lap_j() { return lazy(lap_j_, [&] { return divergence(dj(), bg_); }); }
  const S& lap_j_sq() { return lazy(lap_j_sq_, [&] { return laplacian(j_sq(), bg_); }); }
  const S& lap_p_norm_sq() { return lazy(lap_pn_, [&] { return laplacian(cv_.p_norm_sq, bg_); }); }
  const S& lap_sigma2() { return lazy(lap_s2_, [&] { return laplacian(sigma2(), bg_); }); }
  const S& div_p_dj() { return lazy(div_p_dj_, [&] { return divergence(contract(cv_.p, dj(), bg_), bg_); }); }
  // delta(T_1(grad J)) with T_1 = J g - P.
  const S& div_t1_dj() {
    return lazy(div_t1_dj_, [&] {
      OneForm<S> w = contract(cv_.p, dj(), bg_);
      OneForm<S> t1;
      for (int i = 0; i < bg_.active(); ++i) t1.c.push_back(cv_.j * dj()[i] - w[i]);
      return divergence(t1, bg_);
    });
  }

  S evaluate(const InvariantId& id) {
    const Rational n(n_);
    switch (id.kind) {
      case InvariantKind::J:
        return cv_.j;
      case InvariantKind::SigmaK:
        if (id.k == 1) return cv_.j;
        if (id.k == 2) return sigma2();
        if (id.k == 3) return v3();
        return sigma_k(cv_.p_endo, id.k);
      case InvariantKind::V3:
        return v3();
      case InvariantKind::JSquared:
        return j_sq();
      case InvariantKind::Q4:
        return -lap_j() - scale(p_norm_sq(), Rational(2)) + scale(j_sq(), n / 2);
      case InvariantKind::L1:
        return l1();
      case InvariantKind::L2:
        return l2();
      case InvariantKind::B0:
        return scale(lap_j_sq(), make_rational(-3, 4)) + lap_sigma2() + div_t1_dj() -
               scale(j_sq() * j(), (n - 6) / 4) + scale(j() * p_norm_sq(), (n - 6) / 2) - scale(v3(), Rational(6));
      case InvariantKind::C0:
        return scale(lap_j_sq(), Rational(-2) / (n + 2)) +
               scale(j_sq() * j(), Rational(2) * (n - 6) / (Rational(3) * (n + 2))) +
               scale(v3(), Rational(4) * (n + 2) / (n - 2));
      case InvariantKind::I1: {
        Rational c = Rational(2) * (n + 2) * (n + 2) / (n - 2);
        return l1() + scale(v3(), c);
      }
      case InvariantKind::I2: {
        Rational c = Rational(3) * (n * n + 8 * n - 4) / (Rational(2) * (n - 2));
        return -lap_sigma2() - div_t1_dj() + scale(j() * sigma2(), n - 6) + scale(v3(), c);
      }
    }
    throw DomainError("unknown invariant");
  }

  S evaluate(const InvariantCombo& combo) {
    S acc = bg_.zero();
    for (const auto& [c, id] : combo.terms) acc = acc + scale(evaluate(id), c);
    return acc;
  }

  S l1() { return -lap_j_sq() + scale(j_sq() * j(), Rational(n_ - 6) / 3); }
  S l2() {
    return -lap_p_norm_sq() - scale(div_p_dj(), Rational(2)) - lap_j_sq() + scale(j() * p_norm_sq(), Rational(n_ - 6));
  }

 private:
  template <class T, class F>
  const T& lazy(std::optional<T>& slot, F&& make) {
    if (!slot) slot.emplace(make());
    return *slot;
  }

  const ConfBackground<S>& bg_;
  Curvature<S> cv_;
  int n_;
  std::optional<S> j_sq_, sigma2_, v3_, lap_j_, lap_j_sq_, lap_pn_, lap_s2_, div_p_dj_, div_t1_dj_;
  std::optional<OneForm<S>> dj_;
};

template <class S>
S evaluate_invariant(const InvariantId& id, const ConfBackground<S>& bg) {
  if (id.kind == InvariantKind::SigmaK && (id.k < 1 || id.k > bg.dim()))
    throw DomainError("sigma_k needs 1 <= k <= n");
  if (bg.dim() == 2 && (id.kind == InvariantKind::C0 || id.kind == InvariantKind::I1 || id.kind == InvariantKind::I2))
    throw DomainError("invariant undefined in dimension 2");
  InvariantParts<S> parts(bg);
  return parts.evaluate(id);
}

template <class S>
S evaluate_invariant(const InvariantCombo& combo, const ConfBackground<S>& bg) {
  InvariantParts<S> parts(bg);
  return parts.evaluate(combo);
}

// Exact residuals of the four linear relations among the weight -6 invariants:
//   B0 = -3/4 L1 + 1/2 L2 - 6 v3,   C0 = 2/(n+2) L1 + 4(n+2)/(n-2) v3,
//   I1 = (n+2)/2 C0,                 I2 = 3(n+2)/8 C0 - B0.
struct RelationResidual {
  std::string relation;
  bool identically_zero;
};

std::vector<RelationResidual> relations_check(const ConfBackground<ExpField>& bg);

}  // namespace confcov
