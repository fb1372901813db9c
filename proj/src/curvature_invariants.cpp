#include "confcov/curvature_invariants.hpp"

#include <algorithm>
#include <cctype>

namespace confcov {

int InvariantId::weight_k() const {
  switch (kind) {
    case InvariantKind::J: return 1;
    case InvariantKind::SigmaK: return k;
    case InvariantKind::Q4: return 2;
    case InvariantKind::JSquared: return 2;
    default: return 3;
  }
}

std::string InvariantId::name() const {
  switch (kind) {
    case InvariantKind::J: return "J";
    case InvariantKind::SigmaK: return "sigma" + std::to_string(k);
    case InvariantKind::V3: return "v3";
    case InvariantKind::Q4: return "Q4";
    case InvariantKind::L1: return "L1";
    case InvariantKind::L2: return "L2";
    case InvariantKind::B0: return "B0";
    case InvariantKind::C0: return "C0";
    case InvariantKind::I1: return "I1";
    case InvariantKind::I2: return "I2";
    case InvariantKind::JSquared: return "J2";
  }
  return "?";
}

InvariantId parse_invariant(const std::string& raw) {
  std::string s = raw;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "j") return {InvariantKind::J, 1};
  if (s == "v3") return {InvariantKind::V3, 3};
  if (s == "q4") return {InvariantKind::Q4, 2};
  if (s == "l1") return {InvariantKind::L1, 3};
  if (s == "l2") return {InvariantKind::L2, 3};
  if (s == "b0") return {InvariantKind::B0, 3};
  if (s == "c0") return {InvariantKind::C0, 3};
  if (s == "i1") return {InvariantKind::I1, 3};
  if (s == "i2") return {InvariantKind::I2, 3};
  if (s == "j2") return {InvariantKind::JSquared, 2};
  if (s.rfind("sigma", 0) == 0 && s.size() == 6 && std::isdigit(static_cast<unsigned char>(s[5])) && s[5] != '0')
    return InvariantId::sigma(s[5] - '0');
  throw DomainError("unknown invariant: " + raw);
}

int InvariantCombo::weight_k() const {
  if (terms.empty()) throw DomainError("empty invariant combination");
  int w = terms.front().second.weight_k();
  for (const auto& t : terms)
    if (t.second.weight_k() != w) throw DomainError("invariant combination mixes weights");
  return w;
}

std::string InvariantCombo::name() const {
  std::string s;
  for (const auto& [c, id] : terms) {
    if (!s.empty()) s += " + ";
    s += "(" + c.get_str() + ")" + id.name();
  }
  return s;
}

std::vector<RelationResidual> relations_check(const ConfBackground<ExpField>& bg) {
  const int nn = bg.dim();
  if (nn == 2) throw DomainError("relations need n != 2");
  const Rational n(nn);
  InvariantParts<ExpField> parts(bg);
  ExpField l1 = parts.l1(), l2 = parts.l2(), v3 = parts.v3();
  ExpField b0 = parts.evaluate({InvariantKind::B0, 3});
  ExpField c0 = parts.evaluate({InvariantKind::C0, 3});
  ExpField i1 = parts.evaluate({InvariantKind::I1, 3});
  ExpField i2 = parts.evaluate({InvariantKind::I2, 3});
  std::vector<RelationResidual> out;
  ExpField r1 = b0 - (scale(l1, make_rational(-3, 4)) + scale(l2, make_rational(1, 2)) - scale(v3, Rational(6)));
  out.push_back({"B0 = -3/4 L1 + 1/2 L2 - 6 v3", r1.is_zero()});
  ExpField r2 = c0 - (scale(l1, Rational(2) / (n + 2)) + scale(v3, Rational(4) * (n + 2) / (n - 2)));
  out.push_back({"C0 = 2/(n+2) L1 + 4(n+2)/(n-2) v3", r2.is_zero()});
  ExpField r3 = i1 - scale(c0, (n + 2) / 2);
  out.push_back({"I1 = (n+2)/2 C0", r3.is_zero()});
  ExpField r4 = i2 - (scale(c0, Rational(3) * (n + 2) / 8) - b0);
  out.push_back({"I2 = 3(n+2)/8 C0 - B0", r4.is_zero()});
  return out;
}

}  // namespace confcov
