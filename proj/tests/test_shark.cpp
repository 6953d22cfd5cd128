#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "cgrid/shark.hpp"

using namespace cgrid;

namespace {

// Every cyclic permutation of 1..n, each written as sigma(1..n).
std::vector<Pattern> cyclic_patterns(int n) {
  std::vector<Pattern> out;
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 2);
  do {
    // cycle 1 -> rest[0] -> rest[1] -> ... -> 1
    std::vector<int> s(static_cast<std::size_t>(n));
    int cur = 1;
    for (int r : rest) {
      s[static_cast<std::size_t>(cur - 1)] = r;
      cur = r;
    }
    s[static_cast<std::size_t>(cur - 1)] = 1;
    out.emplace_back(s);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

std::vector<Pattern> patterns_upto(int nmax) {
  std::vector<Pattern> out;
  for (int n = 1; n <= nmax; ++n)
    for (auto& p : cyclic_patterns(n)) out.push_back(p);
  return out;
}

std::set<int> range_set(int a, int b) {
  std::set<int> s;
  for (int m = a; m <= b; ++m) s.insert(m);
  return s;
}

// Second enumeration of the covering relations straight from the
// definitions, written independently of the library.
bool brute_forced(const std::vector<int>& s, int i, int j, int k, int l) {
  for (int a = i; a <= j; ++a)
    for (int b = a + 1; b <= j; ++b) {
      const int fa = s[static_cast<std::size_t>(a - 1)], fb = s[static_cast<std::size_t>(b - 1)];
      if (std::min(fa, fb) <= k && l <= std::max(fa, fb)) return true;
    }
  return false;
}

const Pattern p3 = Pattern::parse("3,1,2");
const Pattern p47 = Pattern::parse("5,4,2,1,3");
const Pattern p4381 = Pattern::parse("4,6,5,3,2,1");
const Pattern p542 = Pattern::parse("6,5,1,2,3,4");

}  // namespace

TEST_CASE("Sharkovskii comparisons") {
  CHECK(shark_compare(SharkNumber(3), SharkNumber(5)) == SharkOrder::precedes);
  CHECK(shark_compare(SharkNumber(4), SharkNumber(2)) == SharkOrder::precedes);
  CHECK(shark_compare(SharkNumber(6), SharkNumber(4)) == SharkOrder::precedes);
  CHECK(shark_compare(SharkNumber(5), SharkNumber(3)) == SharkOrder::succeeds);
  CHECK(shark_compare(SharkNumber(12), SharkNumber(12)) == SharkOrder::equals);
  const SharkNumber s(40);
  CHECK(s.k == 3);
  CHECK(s.q == 5);
  CHECK_THROWS_AS(SharkNumber(0), std::invalid_argument);
}

TEST_CASE("Sharkovskii successors") {
  CHECK(shark_successors(3, 10) == range_set(1, 10));
  CHECK(shark_successors(5, 10) == std::set<int>{1, 2, 4, 5, 6, 7, 8, 9, 10});
  CHECK(shark_successors(6, 12) == std::set<int>{1, 2, 4, 6, 8, 10, 12});
  CHECK(shark_successors(1, 5) == std::set<int>{1});
  CHECK(shark_successors(8, 9) == std::set<int>{1, 2, 4, 8});
}

TEST_CASE("property: the Sharkovskii order is a strict total order") {
  for (int a = 1; a <= 64; ++a)
    for (int b = 1; b <= 64; ++b) {
      const auto ab = shark_compare(SharkNumber(a), SharkNumber(b));
      const auto ba = shark_compare(SharkNumber(b), SharkNumber(a));
      REQUIRE((ab == SharkOrder::equals) == (a == b));
      if (a != b) REQUIRE((ab == SharkOrder::precedes) != (ba == SharkOrder::precedes));
      for (int c = 1; c <= 64; ++c)
        if (shark_precedes(a, b) && shark_precedes(b, c)) REQUIRE(shark_precedes(a, c));
    }
  for (int m = 1; m <= 1024; ++m) {
    if (m != 3) REQUIRE(shark_precedes(3, m));
    if (m != 1) REQUIRE(shark_precedes(m, 1));
  }
  for (int k = 1; k <= 10; ++k) REQUIRE(shark_precedes(1 << k, 1 << (k - 1)));
}

TEST_CASE("patterns") {
  CHECK(p3.n() == 3);
  CHECK(p3(1) == 3);
  CHECK(p3.to_string() == "3,1,2");
  CHECK(Pattern::parse(" 2 ,1").to_string() == "2,1");
  CHECK_THROWS_AS(Pattern::parse("1,3,2"), std::invalid_argument);
  CHECK_THROWS_AS(Pattern::parse("1,1"), std::invalid_argument);
  CHECK_THROWS_AS(Pattern::parse("2,x"), std::invalid_argument);
  CHECK_THROWS_AS(Pattern::parse("4,1,2"), std::invalid_argument);
  CHECK(p3.reversed().to_string() == "2,3,1");
  CHECK(p3.reversed().reversed().to_string() == "3,1,2");
  CHECK(cyclic_patterns(5).size() == 24);
}

TEST_CASE("covering digraph") {
  SUBCASE("swap") {
    const Pattern p = Pattern::parse("2,1");
    CHECK(covers_proper(p, {1, 2}, {1, 2}));
    CHECK(covers_forced(p, {1, 2}, {1, 2}));
  }
  SUBCASE("a=5.42 pattern") {
    CHECK(covers_proper(p542, {4, 5}, {2, 3}));
    CHECK(covers_proper(p542, {2, 3}, {2, 3}));
    CHECK(covers_proper(p542, {2, 3}, {4, 5}));
    CHECK_FALSE(covers_proper(p542, {4, 5}, {4, 5}));
  }
  SUBCASE("forced but not proper") {
    // f(1)=3, f(3)=2 miss 1, but K=[1,2] maps onto [1,3]
    CHECK(covers_forced(p3, {1, 3}, {1, 3}));
    CHECK_FALSE(covers_proper(p3, {1, 3}, {1, 3}));
  }
  SUBCASE("agrees with an independent enumeration") {
    for (const auto& p : patterns_upto(6)) {
      const auto g = covering_digraph(p);
      for (std::size_t a = 0; a < g.nodes.size(); ++a)
        for (std::size_t b = 0; b < g.nodes.size(); ++b) {
          const auto& u = g.nodes[a];
          const auto& v = g.nodes[b];
          REQUIRE(static_cast<bool>(g.forced[a][b]) == brute_forced(p.sigma, u.i, u.j, v.i, v.j));
          const int fa = p(u.i), fb = p(u.j);
          REQUIRE(static_cast<bool>(g.proper[a][b]) == (std::min(fa, fb) <= v.i && v.j <= std::max(fa, fb)));
          REQUIRE(g.index(u) == a);
        }
    }
  }
}

TEST_CASE("Štefan sequences") {
  SUBCASE("3-cycle") {
    const auto s = stefan_sequence(p3);
    REQUIRE_FALSE(s.doubling());
    REQUIRE(s.j.size() == 2);
    CHECK(covers_forced(p3, s.j[1], s.j[1]));
    CHECK(covers_forced(p3, s.j[0], s.j[1]));
    CHECK(covers_forced(p3, s.j[1], s.j[0]));
    CHECK_FALSE(s.j[0].interior_meets(s.j[1]));
  }
  SUBCASE("all points switch sides") {
    const auto s = stefan_sequence(p4381);
    REQUIRE(s.doubling());
    REQUIRE(s.half);
    // f^2 on positions 1..3: 1 -> 4 -> 3, 2 -> 6 -> 1, 3 -> 5 -> 2
    CHECK(s.half->to_string() == "3,1,2");
  }
  SUBCASE("a=5.42 pattern") {
    const auto s = stefan_sequence(p542);
    REQUIRE_FALSE(s.doubling());
    const std::size_t l = s.j.size();
    CHECK(l % 2 == 0);
    CHECK(covers_forced(p542, s.j[1], s.j[1]));
    CHECK(covers_forced(p542, s.j[l - 1], s.j[0]));
    for (std::size_t t = 1; t < l; ++t) {
      CHECK_FALSE(s.j[0].interior_meets(s.j[t]));
      if (t % 2 == 1) CHECK(covers_forced(p542, s.j[0], s.j[t]));
      if (t + 1 < l) CHECK(covers_forced(p542, s.j[t], s.j[t + 1]));
    }
  }
  CHECK_THROWS_AS(stefan_sequence(Pattern::parse("1")), std::invalid_argument);
}

TEST_CASE("non-repeating loops") {
  SUBCASE("3-cycle, m = 7") {
    const auto loop = non_repeating_loop(p3, 7);
    REQUIRE(loop);
    CHECK(loop->m() == 7);
    CHECK(loop->origin == "stefan");
    CHECK(loop_steps_hold(p3, loop->k, false));
    CHECK(loop_non_repeating(p3, loop->k));
    // J_0 followed by J_1 repeated
    for (int t = 2; t < 7; ++t) CHECK(loop->k[static_cast<std::size_t>(t)] == loop->k[1]);
    CHECK(pl_oracle_periods(p3, 7).count(7));
  }
  SUBCASE("a=4.381 pattern has no 3-loop") { CHECK_FALSE(non_repeating_loop(p4381, 3)); }
  SUBCASE("a=5.42 pattern, m = 3") {
    const auto loop = non_repeating_loop(p542, 3);
    REQUIRE(loop);
    CHECK(loop->m() == 3);
    CHECK(loop_non_repeating(p542, loop->k));
    const std::vector<OInterval> diagram{{4, 5}, {2, 3}, {2, 3}};
    CHECK(loop_steps_hold(p542, diagram, true));
    CHECK(loop_non_repeating(p542, diagram));
    const auto found = proper_loop_search(p542, 3);
    REQUIRE(found);
    // shortest cycles come first, so the witness uses two intervals like the diagram
    CHECK(std::set<OInterval>(found->k.begin(), found->k.end()).size() == 2);
    CHECK(loop_steps_hold(p542, found->k, true));
  }
  SUBCASE("condition (1) catches the orbit itself") {
    // [1,2] >-> [1,2] twice for the swap is followed by the endpoint 1
    CHECK(loop_followed_by_endpoint(Pattern::parse("2,1"), {{1, 2}, {1, 2}}));
    CHECK_FALSE(loop_non_repeating(Pattern::parse("2,1"), {{1, 2}, {1, 2}}));
  }
}

TEST_CASE("properized loops") {
  SUBCASE("already proper loop is unchanged") {
    const CoveringLoop in{{{4, 5}, {2, 3}}, false, true, "digraph"};
    const auto out = properize_loop(p542, in);
    CHECK(out.k == in.k);
    CHECK(out.proper);
    CHECK(out.non_repeating);
  }
  SUBCASE("the a=5.42 diagram loop is unchanged") {
    const CoveringLoop in{{{4, 5}, {2, 3}, {2, 3}}, false, true, "digraph"};
    CHECK(properize_loop(p542, in).k == in.k);
  }
  SUBCASE("forced 3-loop of the 3-cycle") {
    // [1,3] -> [1,3] is forced, not proper
    const CoveringLoop in{{{1, 3}, {1, 3}, {1, 3}}, false, false, ""};
    const auto out = properize_loop(p3, in);
    CHECK(out.proper);
    for (std::size_t t = 0; t < 3; ++t) CHECK(in.k[t].contains(out.k[t]));
    // exhaustive search confirms some proper refinement exists
    bool any = false;
    for (const auto& a : all_ointervals(3))
      for (const auto& b : all_ointervals(3))
        for (const auto& c : all_ointervals(3)) any = any || loop_steps_hold(p3, {a, b, c}, true);
    CHECK(any);
  }
  CHECK_THROWS_AS(properize_loop(p3, CoveringLoop{{{2, 3}, {2, 3}}, false, false, ""}), std::invalid_argument);
}

TEST_CASE("forced periods of the case-study patterns") {
  const auto f3 = forced_periods(p3, 20);
  CHECK(f3.periods == range_set(1, 20));
  CHECK(forced_periods(p3.reversed(), 20).periods == range_set(1, 20));

  const auto f5 = forced_periods(p47, 20);
  for (int m = 1; m <= 20; ++m)
    if (m != 3) CHECK(f5.periods.count(m));

  const auto f6 = forced_periods(p4381, 20);
  std::set<int> want{1};
  for (int m = 2; m <= 20; m += 2) want.insert(m);
  CHECK(f6.periods == want);

  const auto f542 = forced_periods(p542, 20);
  CHECK(f542.periods == range_set(1, 20));

  for (const auto* f : {&f3, &f5, &f6, &f542}) CHECK(f->witnesses.size() == f->periods.size());
  for (const auto& w : f542.witnesses) CHECK(witness_valid(p542, w));
}

TEST_CASE("forced periods of tiny patterns") {
  CHECK(forced_periods(Pattern::parse("1"), 10).periods == std::set<int>{1});
  const auto f2 = forced_periods(Pattern::parse("2,1"), 10);
  CHECK(f2.periods == std::set<int>{1, 2});
  CHECK(f2.witnesses[1].orbit);
}

TEST_CASE("piecewise-linear oracle") {
  CHECK(pl_oracle_periods(Pattern::parse("1"), 5) == std::set<int>{1});
  CHECK(pl_oracle_periods(Pattern::parse("2,1"), 8) == std::set<int>{1, 2});
  CHECK(pl_oracle_periods(p542, 10) == range_set(1, 10));
  CHECK(pl_oracle_periods(p3, 12) == range_set(1, 12));
  // 4-cycle 3,4,2,1 has zero entropy: periods 1, 2, 4 only
  CHECK(pl_oracle_periods(Pattern::parse("3,4,2,1"), 12) == std::set<int>{1, 2, 4});
  const auto o6 = pl_oracle_periods(p4381, 12);
  CHECK_FALSE(o6.count(3));
  CHECK_FALSE(o6.count(5));
  CHECK_THROWS_AS(pl_oracle_periods(Pattern::parse("2,3,4,5,6,7,8,9,10,1"), 5), std::length_error);
  CHECK_THROWS_AS(pl_oracle_periods(p3, 15), std::length_error);
}

TEST_CASE("property: reflection invariance, oracle soundness, Sharkovskii tail") {
  int checked = 0;
  for (const auto& p : patterns_upto(7)) {
    const auto f = forced_periods(p, 12);
    const auto fr = forced_periods(p.reversed(), 12);
    REQUIRE_MESSAGE(f.periods == fr.periods, p.to_string());
    const auto oracle = pl_oracle_periods(p, 12);
    for (int m : f.periods) REQUIRE_MESSAGE(oracle.count(m), p.to_string() << " m=" << m);
    for (int m : shark_successors(p.n(), 12)) REQUIRE_MESSAGE(f.periods.count(m), p.to_string() << " m=" << m);
    for (const auto& w : f.witnesses) {
      REQUIRE(witness_valid(p, w));
      if (w.loop) REQUIRE(loop_steps_hold(p, w.loop->k, true));
    }
    ++checked;
  }
  CHECK(checked == 874);
}
