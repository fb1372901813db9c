#include "confcov/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace confcov {

namespace {

constexpr MultiPoly::Key kDegreeUnit = MultiPoly::Key{1} << 56;

MultiPoly::Key var_unit(int var) { return MultiPoly::Key{1} << (48 - 8 * var); }

}  // namespace

void MultiPoly::check_vars(int nvars) {
  if (nvars < 0 || nvars > kMaxVars) throw DomainError("MultiPoly supports at most 7 variables");
}

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) { check_vars(nvars); }

MultiPoly MultiPoly::constant(int nvars, const Rational& c) {
  MultiPoly p(nvars);
  if (sgn(c) != 0) p.terms_.push_back({0, c});
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int var, const Rational& c) {
  if (var < 0 || var >= nvars) throw DomainError("variable index out of range");
  MultiPoly p(nvars);
  if (sgn(c) != 0) p.terms_.push_back({kDegreeUnit + var_unit(var), c});
  return p;
}

MultiPoly::Key MultiPoly::make_key(std::span<const int> exponents) {
  if (exponents.size() > static_cast<std::size_t>(kMaxVars)) throw DomainError("too many exponents");
  Key k = 0;
  int deg = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    int e = exponents[i];
    if (e < 0 || e > kMaxDegree) throw DomainError("exponent out of range");
    deg += e;
    k += static_cast<Key>(e) * var_unit(static_cast<int>(i));
  }
  if (deg > kMaxDegree) throw DomainError("total degree out of range");
  return k + static_cast<Key>(deg) * kDegreeUnit;
}

MultiPoly MultiPoly::monomial(int nvars, std::span<const int> exponents, const Rational& c) {
  if (static_cast<int>(exponents.size()) > nvars) throw DomainError("monomial has too many exponents");
  MultiPoly p(nvars);
  if (sgn(c) != 0) p.terms_.push_back({make_key(exponents), c});
  return p;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return key_degree(terms_.back().key);
}

int MultiPoly::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, key_exponent(t.key, var));
  return d;
}

Rational MultiPoly::coefficient(std::span<const int> exponents) const {
  Key k = make_key(exponents);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const Term& t, Key key) { return t.key < key; });
  if (it != terms_.end() && it->key == k) return it->coeff;
  return 0;
}

Rational MultiPoly::constant_term() const {
  if (!terms_.empty() && terms_.front().key == 0) return terms_.front().coeff;
  return 0;
}

MultiPoly MultiPoly::partial(int var) const {
  if (var < 0 || var >= kMaxVars) throw DomainError("variable index out of range");
  MultiPoly r(nvars_);
  Key unit = kDegreeUnit + var_unit(var);
  for (const auto& t : terms_) {
    int e = key_exponent(t.key, var);
    if (e == 0) continue;
    Rational c = t.coeff * e;
    r.terms_.push_back({t.key - unit, std::move(c)});
  }
  // Surviving keys all shift by the same amount, so order is preserved.
  return r;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
  MultiPoly r(nvars_);
  if (sgn(c) == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Rational v = t.coeff * c;
    r.terms_.push_back({t.key, std::move(v)});
  }
  return r;
}

MultiPoly MultiPoly::with_nvars(int nvars) const {
  check_vars(nvars);
  if (nvars < nvars_) {
    for (const auto& t : terms_)
      for (int v = nvars; v < nvars_; ++v)
        if (key_exponent(t.key, v) != 0) throw DomainError("cannot drop a variable in use");
  }
  MultiPoly r = *this;
  r.nvars_ = nvars;
  return r;
}

MultiPoly MultiPoly::substitute(int var, const Rational& value) const {
  std::vector<MultiPoly> parts = split_by(var);
  MultiPoly r(nvars_);
  Rational power = 1;
  for (const auto& part : parts) {
    r += part.scaled(power);
    power *= value;
  }
  return r;
}

std::vector<MultiPoly> MultiPoly::split_by(int var) const {
  int d = degree_in(var);
  std::vector<MultiPoly> parts(static_cast<std::size_t>(std::max(d + 1, 0)), MultiPoly(nvars_));
  for (const auto& t : terms_) {
    int e = key_exponent(t.key, var);
    Key stripped = t.key - static_cast<Key>(e) * (kDegreeUnit + var_unit(var));
    parts[static_cast<std::size_t>(e)].terms_.push_back({stripped, t.coeff});
  }
  for (auto& p : parts)
    std::sort(p.terms_.begin(), p.terms_.end(),
              [](const Term& a, const Term& b) { return a.key < b.key; });
  return parts;
}

double MultiPoly::evaluate(std::span<const double> point) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff.get_d();
    for (int v = 0; v < kMaxVars; ++v) {
      int e = key_exponent(t.key, v);
      if (e == 0) continue;
      if (static_cast<std::size_t>(v) >= point.size()) throw DomainError("evaluation point too short");
      m *= std::pow(point[static_cast<std::size_t>(v)], e);
    }
    sum += m;
  }
  return sum;
}

Rational MultiPoly::evaluate(std::span<const Rational> point) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational m = t.coeff;
    for (int v = 0; v < kMaxVars; ++v) {
      int e = key_exponent(t.key, v);
      if (e == 0) continue;
      if (static_cast<std::size_t>(v) >= point.size()) throw DomainError("evaluation point too short");
      m *= rational_pow(point[static_cast<std::size_t>(v)], e);
    }
    sum += m;
  }
  return sum;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

void MultiPoly::add_scaled(const MultiPoly& o, int sign) {
  if (&o == this) {
    MultiPoly copy = o;
    add_scaled(copy, sign);
    return;
  }
  nvars_ = std::max(nvars_, o.nvars_);
  if (o.terms_.empty()) return;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].key < o.terms_[j].key)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].key < terms_[i].key) {
      Rational c = sign > 0 ? Rational(o.terms_[j].coeff) : Rational(-o.terms_[j].coeff);
      out.push_back({o.terms_[j].key, std::move(c)});
      ++j;
    } else {
      Rational c = terms_[i].coeff;
      if (sign > 0) c += o.terms_[j].coeff; else c -= o.terms_[j].coeff;
      if (sgn(c) != 0) out.push_back({terms_[i].key, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  add_scaled(o, +1);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  add_scaled(o, -1);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  int nv = std::max(a.nvars_, b.nvars_);
  if (a.terms_.empty() || b.terms_.empty()) return MultiPoly(nv);
  if (a.is_constant()) return b.scaled(a.terms_[0].coeff).with_nvars(nv);
  if (b.is_constant()) return a.scaled(b.terms_[0].coeff).with_nvars(nv);
  if (a.total_degree() + b.total_degree() > MultiPoly::kMaxDegree)
    throw DomainError("polynomial degree overflow");

  MultiPoly r(nv);
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    // Monomial times polynomial keeps the order.
    const MultiPoly& mono = a.terms_.size() == 1 ? a : b;
    const MultiPoly& poly = a.terms_.size() == 1 ? b : a;
    r.terms_.reserve(poly.terms_.size());
    for (const auto& t : poly.terms_) {
      Rational c = t.coeff * mono.terms_[0].coeff;
      r.terms_.push_back({t.key + mono.terms_[0].key, std::move(c)});
    }
    return r;
  }

  std::unordered_map<MultiPoly::Key, Rational> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  Rational prod;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      mpq_mul(prod.get_mpq_t(), ta.coeff.get_mpq_t(), tb.coeff.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(ta.key + tb.key);
      if (inserted) {
        mpq_swap(it->second.get_mpq_t(), prod.get_mpq_t());
      } else {
        mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), prod.get_mpq_t());
      }
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (sgn(c) != 0) r.terms_.push_back({k, std::move(c)});
  std::sort(r.terms_.begin(), r.terms_.end(),
            [](const MultiPoly::Term& x, const MultiPoly::Term& y) { return x.key < y.key; });
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << it->coeff.get_str();
    for (int v = 0; v < kMaxVars; ++v) {
      int e = key_exponent(it->key, v);
      if (e == 0) continue;
      os << "*x" << v;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace confcov
