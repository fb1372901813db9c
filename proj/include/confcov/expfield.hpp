#pragma once

#include "confcov/multipoly.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace confcov {

// The potential Y shared by a family of exponential fields, with its
// coordinate gradient cached. Coordinates are the first `coordinates`
// polynomial variables; later variables (formal parameters) are constants
// for differentiation.
struct ExpContext {
  MultiPoly potential;
  int coordinates = 0;
  std::vector<MultiPoly> gradient;

  static std::shared_ptr<const ExpContext> make(MultiPoly potential, int coordinates);
};

using ExpContextPtr = std::shared_ptr<const ExpContext>;

// Finite sum  sum_q e^{q Y} p_q(x)  with rational exponents q and polynomial
// coefficients p_q. Buckets are sorted by q and carry nonzero polynomials only,
// so the zero field is the empty sum.
class ExpField {
 public:
  struct Bucket {
    Rational exponent;
    MultiPoly coeff;
    bool operator==(const Bucket& o) const { return exponent == o.exponent && coeff == o.coeff; }
  };

  ExpField() = default;
  ExpField(ExpContextPtr ctx, int nvars);

  static ExpField polynomial(ExpContextPtr ctx, MultiPoly p);
  static ExpField exponential(ExpContextPtr ctx, const Rational& q, MultiPoly p);
  static ExpField exponential(ExpContextPtr ctx, const Rational& q);

  const ExpContextPtr& context() const noexcept { return ctx_; }
  int nvars() const noexcept { return nvars_; }
  const std::vector<Bucket>& buckets() const noexcept { return buckets_; }
  bool is_zero() const noexcept { return buckets_.empty(); }
  bool is_polynomial() const noexcept {
    return buckets_.empty() || (buckets_.size() == 1 && sgn(buckets_[0].exponent) == 0);
  }
  MultiPoly bucket(const Rational& q) const;
  std::size_t term_count() const;

  ExpField partial(int axis) const;
  ExpField scaled(const Rational& c) const;
  // Multiply by e^{q Y}.
  ExpField shifted(const Rational& q) const;
  ExpField map_coefficients(const std::function<MultiPoly(const MultiPoly&)>& f) const;

  double evaluate(std::span<const double> point) const;

  ExpField operator-() const;
  ExpField& operator+=(const ExpField& o);
  ExpField& operator-=(const ExpField& o);
  friend ExpField operator+(ExpField a, const ExpField& b) { return a += b; }
  friend ExpField operator-(ExpField a, const ExpField& b) { return a -= b; }
  friend ExpField operator*(const ExpField& a, const ExpField& b);

  bool operator==(const ExpField& o) const { return buckets_ == o.buckets_; }

  std::string to_string() const;

 private:
  void add_signed(const ExpField& o, int sign);
  static ExpContextPtr merge_context(const ExpField& a, const ExpField& b);
  void insert(const Rational& q, MultiPoly p);

  ExpContextPtr ctx_;
  int nvars_ = 0;
  std::vector<Bucket> buckets_;
};

inline ExpField scale(const ExpField& f, const Rational& c) { return f.scaled(c); }
inline ExpField constant_like(const ExpField& like, const Rational& c) {
  return ExpField::polynomial(like.context(), MultiPoly::constant(like.nvars(), c));
}
inline bool is_zero(const ExpField& f) { return f.is_zero(); }
inline ExpField partial(const ExpField& f, int axis) { return f.partial(axis); }

}  // namespace confcov
