#include "confcov/expfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confcov {

std::shared_ptr<const ExpContext> ExpContext::make(MultiPoly potential, int coordinates) {
  if (coordinates < 0 || coordinates > potential.nvars())
    throw DomainError("context coordinate count exceeds polynomial variables");
  auto ctx = std::make_shared<ExpContext>();
  ctx->coordinates = coordinates;
  for (int i = 0; i < coordinates; ++i) ctx->gradient.push_back(potential.partial(i));
  ctx->potential = std::move(potential);
  return ctx;
}

ExpField::ExpField(ExpContextPtr ctx, int nvars) : ctx_(std::move(ctx)), nvars_(nvars) {}

ExpField ExpField::polynomial(ExpContextPtr ctx, MultiPoly p) {
  return exponential(std::move(ctx), Rational(0), std::move(p));
}

ExpField ExpField::exponential(ExpContextPtr ctx, const Rational& q, MultiPoly p) {
  if (sgn(q) != 0 && !ctx) throw DomainError("exponential bucket requires a potential context");
  int nv = p.nvars();
  if (ctx) nv = std::max(nv, ctx->potential.nvars());
  ExpField f(std::move(ctx), nv);
  if (!p.is_zero()) f.buckets_.push_back({q, p.with_nvars(nv)});
  return f;
}

ExpField ExpField::exponential(ExpContextPtr ctx, const Rational& q) {
  int nv = ctx ? ctx->potential.nvars() : 0;
  return exponential(std::move(ctx), q, MultiPoly::constant(nv, 1));
}

MultiPoly ExpField::bucket(const Rational& q) const {
  for (const auto& b : buckets_)
    if (b.exponent == q) return b.coeff;
  return MultiPoly(nvars_);
}

std::size_t ExpField::term_count() const {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.coeff.size();
  return n;
}

void ExpField::insert(const Rational& q, MultiPoly p) {
  if (p.is_zero()) return;
  auto it = std::lower_bound(buckets_.begin(), buckets_.end(), q,
                             [](const Bucket& b, const Rational& key) { return b.exponent < key; });
  if (it != buckets_.end() && it->exponent == q) {
    it->coeff += p;
    if (it->coeff.is_zero()) buckets_.erase(it);
  } else {
    buckets_.insert(it, Bucket{q, std::move(p)});
  }
}

ExpField ExpField::partial(int axis) const {
  ExpField r(ctx_, nvars_);
  for (const auto& b : buckets_) {
    MultiPoly d = b.coeff.partial(axis);
    if (sgn(b.exponent) != 0) {
      if (!ctx_ || axis >= ctx_->coordinates) throw DomainError("derivative along a non-coordinate axis");
      d += b.coeff * ctx_->gradient[static_cast<std::size_t>(axis)].scaled(b.exponent);
    }
    r.insert(b.exponent, std::move(d));
  }
  return r;
}

ExpField ExpField::scaled(const Rational& c) const {
  ExpField r(ctx_, nvars_);
  if (sgn(c) == 0) return r;
  r.buckets_.reserve(buckets_.size());
  for (const auto& b : buckets_) r.buckets_.push_back({b.exponent, b.coeff.scaled(c)});
  return r;
}

ExpField ExpField::shifted(const Rational& q) const {
  if (sgn(q) != 0 && !ctx_) throw DomainError("exponential shift requires a potential context");
  ExpField r = *this;
  for (auto& b : r.buckets_) b.exponent += q;
  return r;
}

ExpField ExpField::map_coefficients(const std::function<MultiPoly(const MultiPoly&)>& f) const {
  ExpField r(ctx_, nvars_);
  for (const auto& b : buckets_) r.insert(b.exponent, f(b.coeff));
  return r;
}

double ExpField::evaluate(std::span<const double> point) const {
  double y = ctx_ ? ctx_->potential.evaluate(point) : 0.0;
  double sum = 0.0;
  for (const auto& b : buckets_) sum += std::exp(b.exponent.get_d() * y) * b.coeff.evaluate(point);
  return sum;
}

ExpField ExpField::operator-() const { return scaled(Rational(-1)); }

ExpContextPtr ExpField::merge_context(const ExpField& a, const ExpField& b) {
  if (a.ctx_ == b.ctx_) return a.ctx_;
  if (!a.ctx_ && a.is_polynomial()) return b.ctx_;
  if (!b.ctx_ && b.is_polynomial()) return a.ctx_;
  if (a.ctx_ && b.ctx_ && a.ctx_->potential == b.ctx_->potential &&
      a.ctx_->coordinates == b.ctx_->coordinates)
    return a.ctx_;
  throw DomainError("exponential fields over different potentials");
}

void ExpField::add_signed(const ExpField& o, int sign) {
  ctx_ = merge_context(*this, o);
  nvars_ = std::max(nvars_, o.nvars_);
  if (&o == this) {
    ExpField copy = o;
    add_signed(copy, sign);
    return;
  }
  for (const auto& b : o.buckets_) insert(b.exponent, sign > 0 ? b.coeff : -b.coeff);
}

ExpField& ExpField::operator+=(const ExpField& o) {
  add_signed(o, +1);
  return *this;
}

ExpField& ExpField::operator-=(const ExpField& o) {
  add_signed(o, -1);
  return *this;
}

ExpField operator*(const ExpField& a, const ExpField& b) {
  ExpField r(ExpField::merge_context(a, b), std::max(a.nvars_, b.nvars_));
  for (const auto& x : a.buckets_)
    for (const auto& y : b.buckets_) {
      Rational q = x.exponent + y.exponent;
      r.insert(q, x.coeff * y.coeff);
    }
  return r;
}

std::string ExpField::to_string() const {
  if (buckets_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& b : buckets_) {
    if (!first) os << " + ";
    first = false;
    os << "exp(" << b.exponent.get_str() << "*Y)*(" << b.coeff.to_string() << ")";
  }
  return os.str();
}

}  // namespace confcov
