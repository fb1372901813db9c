#pragma once

#include "confcov/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace confcov {

// Sparse multivariate polynomial with rational coefficients in at most
// kMaxVars variables. Terms are kept sorted by a packed exponent key whose
// top byte is the total degree, so integer order is graded-lex order and
// monomial multiplication is key addition.
class MultiPoly {
 public:
  using Key = std::uint64_t;
  static constexpr int kMaxVars = 7;
  static constexpr int kMaxDegree = 255;

  struct Term {
    Key key;
    Rational coeff;
    bool operator==(const Term& o) const { return key == o.key && coeff == o.coeff; }
  };

  MultiPoly() = default;
  explicit MultiPoly(int nvars);

  static MultiPoly constant(int nvars, const Rational& c);
  static MultiPoly variable(int nvars, int var, const Rational& c = 1);
  static MultiPoly monomial(int nvars, std::span<const int> exponents, const Rational& c);

  static Key make_key(std::span<const int> exponents);
  static int key_degree(Key k) { return static_cast<int>(k >> 56); }
  static int key_exponent(Key k, int var) {
    return static_cast<int>((k >> (48 - 8 * var)) & 0xFFu);
  }

  int nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].key == 0);
  }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  // -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(int var) const;
  Rational coefficient(std::span<const int> exponents) const;
  Rational constant_term() const;

  MultiPoly partial(int var) const;
  MultiPoly scaled(const Rational& c) const;
  // Ring with more variables; existing variables keep their indices.
  MultiPoly with_nvars(int nvars) const;
  MultiPoly substitute(int var, const Rational& value) const;
  // Coefficients of var^0, var^1, ..., as polynomials not involving var.
  std::vector<MultiPoly> split_by(int var) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate(std::span<const Rational> point) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

  std::string to_string() const;

 private:
  void add_scaled(const MultiPoly& o, int sign);
  static void check_vars(int nvars);

  int nvars_ = 0;
  std::vector<Term> terms_;
};

// Ring helpers shared with the generic tensor and calculus code.
inline MultiPoly scale(const MultiPoly& p, const Rational& c) { return p.scaled(c); }
inline MultiPoly constant_like(const MultiPoly& like, const Rational& c) {
  return MultiPoly::constant(like.nvars(), c);
}
inline bool is_zero(const MultiPoly& p) { return p.is_zero(); }

inline Rational scale(const Rational& x, const Rational& c) { return Rational(x * c); }
inline Rational constant_like(const Rational&, const Rational& c) { return c; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline double scale(double x, const Rational& c) { return x * c.get_d(); }
inline double constant_like(double, const Rational& c) { return c.get_d(); }
inline bool is_zero(double x) { return x == 0.0; }

}  // namespace confcov
