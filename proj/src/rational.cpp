#include "confcov/rational.hpp"

#include <cctype>

namespace confcov {

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw DomainError("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw DomainError("malformed rational literal: " + s);
  if (q.get_den() == 0) throw DomainError("rational with zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational factorial(int n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) return rational_pow(reciprocal(base), -exponent);
  Rational r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

Rational binomial(const Rational& x, int j) {
  if (j < 0) return 0;
  Rational r = 1;
  for (int i = 0; i < j; ++i) {
    Rational f = x - i;
    r *= f;
  }
  r /= factorial(j);
  return r;
}

Rational rising_factorial(const Rational& x, int len) {
  Rational r = 1;
  for (int i = 0; i < len; ++i) {
    Rational f = x + i;
    r *= f;
  }
  return r;
}

Rational reciprocal(const Rational& q) {
  if (sgn(q) == 0) throw DomainError("division by zero");
  Rational one = 1;
  Rational r = one / q;
  return r;
}

}  // namespace confcov
