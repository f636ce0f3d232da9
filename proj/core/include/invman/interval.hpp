#pragma once

#include <cmath>
#include <limits>

namespace invman {

// Closed real interval [lo, hi] with outward rounding: every arithmetic
// result is widened by one ulp on each side, so it encloses the exact image
// of the operands regardless of the FPU rounding mode.
class Interval {
 public:
  constexpr Interval() = default;
  constexpr Interval(double point) : lo_(point), hi_(point) {}  // NOLINT: implicit by design
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  double width() const { return hi_ - lo_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  // Upper bound of |x| over the interval.
  double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }
  // Lower bound of |x| over the interval.
  double mig() const;

  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator-=(const Interval& b) { return *this = *this - b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  friend Interval operator*(const Interval& a, const Interval& b);
  // Throws DivisionByZeroInterval when 0 ∈ b.
  friend Interval operator/(const Interval& a, const Interval& b);

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval abs(const Interval& a);
// Throws NegativeSqrt when a.lo() < 0.
Interval sqrt(const Interval& a);
Interval sqr(const Interval& a);
Interval hull(const Interval& a, const Interval& b);

double round_down(double x);
double round_up(double x);

// Axis-aligned rectangle [re] + i[im].
class CInterval {
 public:
  constexpr CInterval() = default;
  CInterval(Interval re, Interval im = Interval(0.0)) : re_(re), im_(im) {}  // NOLINT
  CInterval(double re, double im) : re_(re), im_(im) {}

  const Interval& re() const { return re_; }
  const Interval& im() const { return im_; }
  bool contains(double x, double y) const { return re_.contains(x) && im_.contains(y); }

  CInterval& operator+=(const CInterval& b) { return *this = *this + b; }
  CInterval& operator-=(const CInterval& b) { return *this = *this - b; }
  CInterval& operator*=(const CInterval& b) { return *this = *this * b; }

  friend CInterval operator+(const CInterval& a, const CInterval& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend CInterval operator-(const CInterval& a, const CInterval& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend CInterval operator-(const CInterval& a) { return {-a.re_, -a.im_}; }
  friend CInterval operator*(const CInterval& a, const CInterval& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend CInterval operator*(const Interval& s, const CInterval& b) {
    return {s * b.re_, s * b.im_};
  }
  // Throws DivisionByZeroInterval when 0 may lie in b.
  friend CInterval operator/(const CInterval& a, const CInterval& b);

 private:
  Interval re_;
  Interval im_;
};

// Enclosure of |z| over the rectangle (outward-widened hypot).
Interval abs(const CInterval& z);

}  // namespace invman
