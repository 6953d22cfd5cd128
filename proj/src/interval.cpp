#include "cgrid/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace cgrid {

double Interval::mid() const {
  if (lo_ == hi_) return lo_;
  if (!is_finite()) {
    if (std::isinf(lo_) && std::isinf(hi_)) return 0.0;
    return std::isinf(lo_) ? -std::numeric_limits<double>::max() : std::numeric_limits<double>::max();
  }
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::rad() const { return 0.5 * width(); }

Interval sqr(const Interval& a) {
  using namespace rounding;
  if (a.lo() >= 0) return Interval::raw(mul_down(a.lo(), a.lo()), mul_up(a.hi(), a.hi()));
  if (a.hi() <= 0) return Interval::raw(mul_down(a.hi(), a.hi()), mul_up(a.lo(), a.lo()));
  const double m = std::fmax(-a.lo(), a.hi());
  return Interval::raw(0.0, mul_up(m, m));
}

Interval pow(const Interval& a, int n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent");
  if (n == 0) return Interval(1.0);
  if (n % 2 == 0) {
    Interval h = pow(a, n / 2);
    return sqr(h);
  }
  // odd powers are monotone, so only the endpoints matter
  Interval l(a.lo()), h(a.hi());
  const Interval bl = l, bh = h;
  for (int i = 1; i < n; ++i) {
    l = l * bl;
    h = h * bh;
  }
  return Interval::raw(l.lo(), h.hi());
}

Interval abs(const Interval& a) {
  if (a.lo() >= 0) return a;
  if (a.hi() <= 0) return -a;
  return Interval(0.0, std::fmax(-a.lo(), a.hi()));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::fmin(a.lo(), b.lo()), std::fmax(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::fmax(a.lo(), b.lo());
  const double hi = std::fmin(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

bool subset(const Interval& a, const Interval& b) { return b.contains(a); }

bool subset_interior(const Interval& a, const Interval& b) { return b.lo() < a.lo() && a.hi() < b.hi(); }

std::pair<Interval, Interval> split(const Interval& a) {
  const double m = a.mid();
  return {Interval(a.lo(), m), Interval(m, a.hi())};
}

Interval inflate(const Interval& a, double factor, double abs_slack) {
  const double r = rounding::add_up(rounding::mul_up(a.rad(), factor), abs_slack);
  const double m = a.mid();
  return Interval(std::fmin(rounding::sub_down(m, r), a.lo()), std::fmax(rounding::add_up(m, r), a.hi()));
}

std::string to_string(const Interval& a) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo(), a.hi());
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Interval& a) { return os << to_string(a); }

}  // namespace cgrid
