#include "invman/interval.hpp"

#include <algorithm>

#include "invman/errors.hpp"

namespace invman {

double round_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double round_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw InvalidArgument("Interval: lo must not exceed hi");
}

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::fmin(std::fabs(lo_), std::fabs(hi_));
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r;
  r.lo_ = round_down(a.lo_ + b.lo_);
  r.hi_ = round_up(a.hi_ + b.hi_);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r;
  r.lo_ = round_down(a.lo_ - b.hi_);
  r.hi_ = round_up(a.hi_ - b.lo_);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r;
  r.lo_ = -a.hi_;
  r.hi_ = -a.lo_;
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const double p1 = a.lo_ * b.lo_;
  const double p2 = a.lo_ * b.hi_;
  const double p3 = a.hi_ * b.lo_;
  const double p4 = a.hi_ * b.hi_;
  Interval r;
  r.lo_ = round_down(std::min({p1, p2, p3, p4}));
  r.hi_ = round_up(std::max({p1, p2, p3, p4}));
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DivisionByZeroInterval("Interval: divisor contains zero");
  Interval inv;
  inv.lo_ = round_down(1.0 / b.hi_);
  inv.hi_ = round_up(1.0 / b.lo_);
  return a * inv;
}

Interval abs(const Interval& a) {
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return -a;
  return Interval(0.0, a.mag());
}

Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0) throw NegativeSqrt("Interval: sqrt of negative values");
  const double lo = a.lo() == 0.0 ? 0.0 : round_down(std::sqrt(a.lo()));
  return Interval(std::max(0.0, lo), round_up(std::sqrt(a.hi())));
}

Interval sqr(const Interval& a) {
  const double m = a.mig();
  const double M = a.mag();
  return Interval(std::max(0.0, round_down(m * m)), round_up(M * M));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

CInterval operator/(const CInterval& a, const CInterval& b) {
  const Interval den = sqr(b.re_) + sqr(b.im_);
  if (den.lo() <= 0.0) throw DivisionByZeroInterval("CInterval: divisor may be zero");
  const CInterval num = a * CInterval(b.re_, -b.im_);
  return {num.re_ / den, num.im_ / den};
}

Interval abs(const CInterval& z) {
  // std::hypot is within one ulp; two-ulp widening keeps the enclosure.
  const double lo = std::hypot(z.re().mig(), z.im().mig());
  const double hi = std::hypot(z.re().mag(), z.im().mag());
  return Interval(std::max(0.0, round_down(round_down(lo))), round_up(round_up(hi)));
}

}  // namespace invman
