#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace confcov {

// Arbitrary-precision rational. gmpxx keeps values canonical (lowest terms,
// positive denominator) across arithmetic; construct through make_rational.
using Rational = mpq_class;

// Raised for any domain violation in the exact layer (division by zero,
// poles, incompatible operands). Never carries a partial result.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

Rational factorial(int n);
Rational rational_pow(const Rational& base, int exponent);
// Generalized binomial C(x, j) = x (x-1) ... (x-j+1) / j!, valid for rational x.
Rational binomial(const Rational& x, int j);
// Rising factorial x (x+1) ... (x+len-1).
Rational rising_factorial(const Rational& x, int len);
Rational reciprocal(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace confcov
