#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cgrid {

/// Raised when an interval operation leaves its domain (e.g. division by an
/// interval containing zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace rounding {

// Directed rounding of the basic operations without touching the FPU mode.
// Each native round-to-nearest result is corrected by one ulp only in the
// direction of the exact error, which is recovered with error-free
// transformations (TwoSum, FMA). Results are therefore as tight as true
// directed rounding except in the near-underflow range, where both
// directions are widened by one ulp.

inline double prev(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double next(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

constexpr double kTiny = 0x1p-960;

inline double add_down(double x, double y) {
  const double s = x + y;
  if (!std::isfinite(s)) return std::isinf(s) && s > 0 && std::isfinite(x) && std::isfinite(y) ? std::numeric_limits<double>::max() : s;
  const double bb = s - x;
  const double e = (x - (s - bb)) + (y - bb);
  return e < 0 ? prev(s) : s;
}

inline double add_up(double x, double y) {
  const double s = x + y;
  if (!std::isfinite(s)) return std::isinf(s) && s < 0 && std::isfinite(x) && std::isfinite(y) ? -std::numeric_limits<double>::max() : s;
  const double bb = s - x;
  const double e = (x - (s - bb)) + (y - bb);
  return e > 0 ? next(s) : s;
}

inline double sub_down(double x, double y) { return add_down(x, -y); }
inline double sub_up(double x, double y) { return add_up(x, -y); }

inline double mul_down(double x, double y) {
  const double p = x * y;
  if (!std::isfinite(p)) {
    if (std::isinf(p) && std::isfinite(x) && std::isfinite(y)) return p > 0 ? std::numeric_limits<double>::max() : p;
    return p;
  }
  if (std::fabs(p) < kTiny) return (x == 0 || y == 0) ? 0.0 : prev(p);
  const double e = std::fma(x, y, -p);
  return e < 0 ? prev(p) : p;
}

inline double mul_up(double x, double y) {
  const double p = x * y;
  if (!std::isfinite(p)) {
    if (std::isinf(p) && std::isfinite(x) && std::isfinite(y)) return p < 0 ? -std::numeric_limits<double>::max() : p;
    return p;
  }
  if (std::fabs(p) < kTiny) return (x == 0 || y == 0) ? 0.0 : next(p);
  const double e = std::fma(x, y, -p);
  return e > 0 ? next(p) : p;
}

inline double div_down(double x, double y) {
  const double q = x / y;
  if (!std::isfinite(q)) {
    if (std::isinf(q) && std::isfinite(x) && std::isfinite(y)) return q > 0 ? std::numeric_limits<double>::max() : q;
    return q;
  }
  if (x == 0) return 0.0;
  if (std::isinf(y)) return q == 0 ? (std::signbit(x) != std::signbit(y) ? -std::numeric_limits<double>::denorm_min() : 0.0) : q;
  if (std::fabs(q) < kTiny || std::fabs(x) < kTiny) return prev(q);
  const double r = std::fma(-q, y, x);  // x - q*y, exact
  return (r < 0) != (y < 0) && r != 0 ? prev(q) : q;
}

inline double div_up(double x, double y) {
  const double q = x / y;
  if (!std::isfinite(q)) {
    if (std::isinf(q) && std::isfinite(x) && std::isfinite(y)) return q < 0 ? -std::numeric_limits<double>::max() : q;
    return q;
  }
  if (x == 0) return 0.0;
  if (std::isinf(y)) return q == 0 ? (std::signbit(x) == std::signbit(y) ? std::numeric_limits<double>::denorm_min() : 0.0) : q;
  if (std::fabs(q) < kTiny || std::fabs(x) < kTiny) return next(q);
  const double r = std::fma(-q, y, x);
  return (r > 0) == (y > 0) && r != 0 ? next(q) : q;
}

}  // namespace rounding

/// Closed interval [lo, hi] of reals with outward-rounded arithmetic.
///
/// Every operation returns an enclosure of the exact real result. Infinite
/// endpoints only arise from overflow and make every later strict test fail.
class Interval {
 public:
  constexpr Interval() = default;
  constexpr Interval(double x) : lo_(x), hi_(x) {}  // NOLINT: points convert implicitly
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi or NaN endpoint");
  }

  /// Unchecked construction for arithmetic kernels; a NaN endpoint is
  /// replaced by the corresponding infinity.
  static Interval raw(double lo, double hi) {
    Interval r;
    r.lo_ = std::isnan(lo) ? -std::numeric_limits<double>::infinity() : lo;
    r.hi_ = std::isnan(hi) ? std::numeric_limits<double>::infinity() : hi;
    return r;
  }

  constexpr double lo() const { return lo_; }
  constexpr double hi() const { return hi_; }

  double mid() const;
  double rad() const;  ///< upper bound on (hi - lo) / 2
  double width() const { return rounding::sub_up(hi_, lo_); }
  double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const { return contains(0.0) ? 0.0 : std::fmin(std::fabs(lo_), std::fabs(hi_)); }
  bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }
  bool is_point() const { return lo_ == hi_; }

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool strictly_contains(const Interval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }
  bool certainly_positive() const { return lo_ > 0; }
  bool certainly_negative() const { return hi_ < 0; }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval operator-(const Interval& a) { return Interval::raw(-a.hi(), -a.lo()); }

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval::raw(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval::raw(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}

inline Interval operator*(const Interval& a, const Interval& b) {
  using namespace rounding;
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (al >= 0) {
    if (bl >= 0) return Interval::raw(mul_down(al, bl), mul_up(ah, bh));
    if (bh <= 0) return Interval::raw(mul_down(ah, bl), mul_up(al, bh));
    return Interval::raw(mul_down(ah, bl), mul_up(ah, bh));
  }
  if (ah <= 0) {
    if (bl >= 0) return Interval::raw(mul_down(al, bh), mul_up(ah, bl));
    if (bh <= 0) return Interval::raw(mul_down(ah, bh), mul_up(al, bl));
    return Interval::raw(mul_down(al, bh), mul_up(al, bl));
  }
  if (bl >= 0) return Interval::raw(mul_down(al, bh), mul_up(ah, bh));
  if (bh <= 0) return Interval::raw(mul_down(ah, bl), mul_up(al, bl));
  return Interval::raw(std::fmin(mul_down(al, bh), mul_down(ah, bl)), std::fmax(mul_up(al, bl), mul_up(ah, bh)));
}

/// @throws DomainError when 0 is contained in b.
inline Interval operator/(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (b.contains(0.0)) throw DomainError("interval division by an interval containing zero");
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (bl > 0) {
    if (al >= 0) return Interval::raw(div_down(al, bh), div_up(ah, bl));
    if (ah <= 0) return Interval::raw(div_down(al, bl), div_up(ah, bh));
    return Interval::raw(div_down(al, bl), div_up(ah, bl));
  }
  if (al >= 0) return Interval::raw(div_down(ah, bh), div_up(al, bl));
  if (ah <= 0) return Interval::raw(div_down(ah, bl), div_up(al, bh));
  return Interval::raw(div_down(ah, bh), div_up(al, bh));
}

inline Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
inline Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
inline Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
inline Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

Interval sqr(const Interval& a);
Interval pow(const Interval& a, int n);
/// Enclosure of |a|.
Interval abs(const Interval& a);

Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);
bool subset(const Interval& a, const Interval& b);            ///< a ⊆ b
bool subset_interior(const Interval& a, const Interval& b);   ///< a ⊂ int b
std::pair<Interval, Interval> split(const Interval& a);       ///< bisection at the midpoint

/// Widen by a relative factor about the midpoint plus an absolute slack.
Interval inflate(const Interval& a, double factor, double abs_slack);

std::ostream& operator<<(std::ostream& os, const Interval& a);
std::string to_string(const Interval& a);

}  // namespace cgrid
