#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "cgrid/flow.hpp"
#include "cgrid/rossler.hpp"
#include "cgrid/taylor.hpp"

using namespace cgrid;

namespace {

PolyField linear1() { return PolyField(1, {{Monomial("1", {1})}}); }
PolyField zero1() { return PolyField(1, {{}}); }
PolyField square1() { return PolyField(1, {{Monomial("1", {2})}}); }
PolyField oscillator() { return PolyField(2, {{Monomial("-1", {0, 1})}, {Monomial("1", {1, 0})}}); }

double factorial(int j) { return j <= 1 ? 1.0 : j * factorial(j - 1); }

// Extended precision Taylor integration with a small fixed step.
std::vector<long double> reference_flow(const PolyField& f, std::vector<long double> x, long double t, long double h) {
  TaylorEngine<long double> eng(f);
  const int order = 24;
  long double done = 0;
  while (done < t) {
    const long double step = std::min(h, t - done);
    eng.run(x, order, false);
    for (std::size_t i = 0; i < x.size(); ++i) {
      long double acc = 0;
      for (int j = order; j >= 0; --j) acc = acc * step + eng.coeff(j, i);
      x[i] = acc;
    }
    done = step >= t - done ? t : done + step;
  }
  return x;
}

}  // namespace

TEST_CASE("Taylor coefficients of the exponential") {
  const auto c = taylor_coeffs(linear1(), Box{Interval(1.0)}, 4);
  REQUIRE(c.size() == 5);
  for (int j = 0; j <= 4; ++j) CHECK(c[static_cast<std::size_t>(j)][0].contains(1.0 / factorial(j)));
  CHECK(c[3][0].contains(Interval(1.0) / Interval(6.0)));
}

TEST_CASE("Taylor coefficients of 1/(1-t)") {
  const auto c = taylor_coeffs(square1(), Box{Interval(1.0)}, 12);
  for (const auto& b : c) {
    CHECK(b[0].contains(1.0));
    CHECK(b[0].width() < 1e-14);
  }
}

TEST_CASE("Rossler field at the origin") {
  const PolyField f = rossler_field("5.25");
  const auto c = taylor_coeffs(f, Box{Interval(0.0), Interval(0.0), Interval(0.0)}, 3);
  CHECK(c[1][0].contains(0.0));
  CHECK(c[1][1].contains(0.0));
  CHECK(c[1][2].contains(0.2));
  CHECK(c[1][2].width() < 1e-16);
}

TEST_CASE("a-priori enclosures") {
  SUBCASE("constant field") {
    const Box x{Interval(1, 2)};
    const auto z = a_priori_enclosure(zero1(), x, 0.7);
    REQUIRE(z);
    CHECK(*z == x);
  }
  SUBCASE("exponential, h = 0.1") {
    const Box x{Interval(1.0)};
    const auto z = a_priori_enclosure(linear1(), x, 0.1);
    REQUIRE(z);
    CHECK(subset(*z, Box{Interval(0.9, 1.3)}));
    // direct check of the Picard inclusion
    CHECK(subset(x + Interval(0.0, 0.1) * linear1().eval(*z), *z));
  }
  SUBCASE("blow-up before t = 1") {
    CHECK_FALSE(a_priori_enclosure(square1(), Box{Interval(1.0)}, 1.0).has_value());
    // 1 + [0,1] [1,b]^2 = [1, 1+b^2] is never inside [1,b]
    for (double b : {1.5, 2.0, 10.0, 1e3, 1e8}) {
      const Box z{Interval(1.0, b)};
      CHECK_FALSE(subset(Box{Interval(1.0)} + Interval(0.0, 1.0) * square1().eval(z), z));
    }
  }
}

TEST_CASE("one step of the zero field keeps the set") {
  const Box x{Interval(-1.0, 3.0)};
  LohnerSet s = LohnerSet::from_box(x);
  one_step(zero1(), s, StepPolicy{});
  const Box h = s.hull();
  CHECK(subset(x, h));
  CHECK(h[0].lo() >= std::nextafter(std::nextafter(-1.0, -2.0), -2.0));
  CHECK(h[0].hi() <= std::nextafter(std::nextafter(3.0, 4.0), 4.0));
}

TEST_CASE("e by repeated steps") {
  const LohnerSet s = flow_to(linear1(), LohnerSet::from_box(Box{Interval(1.0)}), 1.0);
  const Box h = s.hull();
  CHECK(h[0].contains(2.718281828459045));
  CHECK(h[0].width() <= 1e-10);
  MESSAGE("width of e enclosure: " << h[0].width());
}

TEST_CASE("harmonic oscillator over a full turn") {
  const double t = 2 * std::numbers::pi;
  const LohnerSet s = flow_to(oscillator(), LohnerSet::from_box(Box{Interval(0.0), Interval(-1.0)}), t);
  const Box h = s.hull();
  CHECK(h.contains(PVector::Map(std::vector<double>{0.0, -1.0}.data(), 2)));
  // the exact state at the double t is (sin t, -cos t)
  CHECK(h[0].contains(t - 2 * 3.14159265358979323846264338327950288L));
  CHECK(h.max_width() <= 1e-8);
  MESSAGE("width after 2pi: " << h.max_width());
}

TEST_CASE("variational equations") {
  SUBCASE("zero field") {
    auto [s, v] = flow_with_variational(zero1(), LohnerSet::from_box(Box{Interval(0.5)}), 3.0);
    CHECK(v(0, 0).contains(1.0));
  }
  SUBCASE("exponential") {
    auto [s, v] = flow_with_variational(linear1(), LohnerSet::from_box(Box{Interval(1.0)}), 1.0);
    CHECK(v(0, 0).contains(2.718281828459045));
    CHECK(v(0, 0).width() < 1e-10);
  }
  SUBCASE("quarter turn") {
    auto [s, v] = flow_with_variational(oscillator(), LohnerSet::from_box(Box{Interval(0.0), Interval(-1.0)}), std::numbers::pi / 2);
    const double want[2][2] = {{0, -1}, {1, 0}};
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(v(i, j).contains(want[i][j]));
        CHECK(v(i, j).width() <= 1e-8);
      }
  }
}

TEST_CASE("property: Rossler reference trajectories stay inside validated enclosures") {
  const PolyField f = rossler_field("5.25");
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uy(-10.0, -3.0), uz(0.02, 0.05), ux(-1.0, 1.0);
  int checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double x0[3] = {ux(rng), uy(rng), uz(rng)};
    LohnerSet s = LohnerSet::from_box(Box{Interval(x0[0]), Interval(x0[1]), Interval(x0[2])});
    std::vector<long double> ref(x0, x0 + 3);
    const double dt = 0.3;
    for (int k = 0; k < 20; ++k) {
      s = flow_to(f, s, dt);
      ref = reference_flow(f, ref, dt, 0.002L);
      const Box h = s.hull();
      for (std::size_t i = 0; i < 3; ++i) {
        const long double r = ref[i];
        // the reference is itself approximate: its error is far below 1e-14
        REQUIRE(static_cast<long double>(h[i].lo()) <= r);
        REQUIRE(r <= static_cast<long double>(h[i].hi()));
      }
      ++checks;
    }
  }
  CHECK(checks == 2000);
}

TEST_CASE("property: images of nested sets nest") {
  const PolyField f = rossler_field("4.7");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StepPolicy pol;
  pol.fixed_step = 0.05;
  for (int trial = 0; trial < 200; ++trial) {
    Box big(3), small(3);
    const double c[3] = {-2 + 4 * u(rng), -8 + 6 * u(rng), 0.02 + 0.3 * u(rng)};
    for (std::size_t i = 0; i < 3; ++i) {
      const double r = 1e-4 + 1e-2 * u(rng);
      big[i] = Interval(c[i] - r, c[i] + r);
      const double rs = r * (0.05 + 0.4 * u(rng));
      const double off = (r - rs) * 0.9 * (2 * u(rng) - 1);
      small[i] = Interval(c[i] + off - rs, c[i] + off + rs);
    }
    LohnerSet sb = LohnerSet::from_box(big), ss = LohnerSet::from_box(small);
    for (int k = 0; k < 4; ++k) {
      one_step(f, sb, pol);
      one_step(f, ss, pol);
      REQUIRE(subset(ss.hull(), sb.hull()));
    }
  }
}

TEST_CASE("property: chain rule for variational enclosures") {
  // Both the direct enclosure over [0, t1 + t2] and the product of the two
  // legs enclose the same derivatives, so they must overlap entrywise and both
  // contain an extended precision central difference at the box center.
  const PolyField f = rossler_field("5.25");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uy(-10.0, -3.0), t(0.2, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    const double y = uy(rng);
    const Box x0{Interval(0.0), Interval(y - 1e-6, y + 1e-6), Interval(0.03, 0.030002)};
    const double t1 = t(rng), t2 = t(rng);
    auto [s1, v1] = flow_with_variational(f, LohnerSet::from_box(x0), t1);
    auto [s2, v2] = flow_with_variational(f, s1, t2);
    auto [s12, v12] = flow_with_variational(f, LohnerSet::from_box(x0), t1 + t2);
    (void)s2;
    (void)s12;
    const IMatrix prod = v2 * v1;
    const PVector c = x0.mid();
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<long double> up(c.data(), c.data() + 3), dn = up;
      const long double step = 1e-5L;
      up[j] += step;
      dn[j] -= step;
      const auto fu = reference_flow(f, up, t1 + t2, 0.002L), fd = reference_flow(f, dn, t1 + t2, 0.002L);
      for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(intersect(v12(i, j), prod(i, j)).has_value());
        const double fdij = static_cast<double>((fu[i] - fd[i]) / (2 * step));
        // central difference error is O(step^2 |D^3 Phi|), far below 1e-6
        REQUIRE(inflate(v12(i, j), 1.0, 1e-6).contains(fdij));
        REQUIRE(inflate(prod(i, j), 1.0, 1e-6).contains(fdij));
      }
    }
  }
}

TEST_CASE("property: raising the order does not widen the e enclosure") {
  double prev = INFINITY;
  for (int order : {2, 4, 8, 16}) {
    StepPolicy pol;
    pol.order = order;
    pol.fixed_step = 0.1;
    const LohnerSet s = flow_to(linear1(), LohnerSet::from_box(Box{Interval(1.0)}), 1.0, pol);
    const double w = s.hull()[0].width();
    CHECK(s.hull()[0].contains(2.718281828459045));
    CHECK(w <= prev);
    prev = w;
  }
}
