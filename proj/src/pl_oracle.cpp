// Brute-force period finder for the connect-the-dots map of a pattern.
//
// The map sends position x to sigma(x) and is affine on every unit interval
// [k, k+1]. Unit intervals form a Markov partition, so a fixed point of f^m
// lies in a cylinder given by a closed path k_0 -> ... -> k_{m-1} -> k_0 of
// unit intervals. On a cylinder f^m(x) = a x + b with integer a, b. The fixed
// point b / (1 - a) is then iterated exactly as p / q (denominators never
// change under integer affine maps) to read off its least period.

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "cgrid/shark.hpp"

namespace cgrid {

namespace {

struct Rational {
  std::int64_t p, q;  // q > 0
};

// f on the unit interval starting at k: x -> s x + c
struct Piece {
  std::int64_t s, c;
};

int least_period(const Pattern& pat, const std::vector<Piece>& pieces, Rational x, int bound) {
  const std::int64_t n = pat.n();
  Rational y = x;
  for (int d = 1; d <= bound; ++d) {
    // unit interval of y; at a breakpoint both neighbours agree
    std::int64_t k = y.p / y.q;
    if (k >= n) k = n - 1;
    if (k < 1) k = 1;
    const Piece& f = pieces[static_cast<std::size_t>(k)];
    y = {f.s * y.p + f.c * y.q, y.q};
    if (y.p == x.p) return d;
  }
  return 0;
}

}  // namespace

std::set<int> pl_oracle_periods(const Pattern& pat, int upto) {
  const int n = pat.n();
  if (upto < 1) throw std::invalid_argument("upto must be positive");
  if (n > 9 || upto > 14) throw std::length_error("oracle refuses n > 9 or m > 14");
  std::set<int> out;
  if (n == 1) {
    out.insert(1);
    return out;
  }
  std::vector<Piece> pieces(static_cast<std::size_t>(n));
  for (int k = 1; k < n; ++k) {
    const std::int64_t s = pat(k + 1) - pat(k);
    pieces[static_cast<std::size_t>(k)] = {s, pat(k) - s * k};
  }
  // unit interval k covers l when l lies between sigma(k) and sigma(k+1)
  std::vector<std::vector<int>> next(static_cast<std::size_t>(n));
  for (int k = 1; k < n; ++k) {
    const int lo = std::min(pat(k), pat(k + 1)), hi = std::max(pat(k), pat(k + 1));
    for (int l = lo; l < hi; ++l) next[static_cast<std::size_t>(k)].push_back(l);
  }
  // reach[r][k][k0]: k0 reachable from k in exactly r steps
  std::vector<std::vector<std::vector<char>>> reach(static_cast<std::size_t>(upto + 1),
                                                    std::vector<std::vector<char>>(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0)));
  for (int k = 1; k < n; ++k) reach[0][static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1;
  for (int r = 1; r <= upto; ++r)
    for (int k = 1; k < n; ++k)
      for (int l : next[static_cast<std::size_t>(k)])
        for (int k0 = 1; k0 < n; ++k0)
          if (reach[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(l)][static_cast<std::size_t>(k0)])
            reach[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)][static_cast<std::size_t>(k0)] = 1;

  for (int m = 1; m <= upto; ++m) {
    if (out.count(m)) continue;
    for (int k0 = 1; k0 < n && !out.count(m); ++k0) {
      // depth-first over itineraries of length m closing at k0
      std::function<bool(int, int, std::int64_t, std::int64_t)> walk = [&](int depth, int k, std::int64_t a, std::int64_t b) -> bool {
        const Piece& f = pieces[static_cast<std::size_t>(k)];
        const std::int64_t a2 = f.s * a, b2 = f.s * b + f.c;
        if (depth + 1 == m) {
          bool closes = false;
          for (int l : next[static_cast<std::size_t>(k)]) closes = closes || l == k0;
          if (!closes) return false;
          Rational x;
          if (a2 == 1) {
            // f^m is the identity on the whole unit interval; a point with a
            // large prime denominator is generic there
            constexpr std::int64_t q = 1000003;
            x = {k0 * q + 1, q};
          } else {
            std::int64_t num = b2, den = 1 - a2;
            if (den < 0) {
              num = -num;
              den = -den;
            }
            x = {num, den};
          }
          const int d = least_period(pat, pieces, x, m);
          if (d > 0) out.insert(d);
          return d == m;
        }
        for (int l : next[static_cast<std::size_t>(k)]) {
          if (!reach[static_cast<std::size_t>(m - depth - 1)][static_cast<std::size_t>(l)][static_cast<std::size_t>(k0)]) continue;
          if (walk(depth + 1, l, a2, b2)) return true;
        }
        return false;
      };
      walk(0, k0, 1, 0);
    }
  }
  return out;
}

}  // namespace cgrid
