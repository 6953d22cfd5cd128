#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cgrid/certificate.hpp"
#include "cgrid/decimal.hpp"
#include "cgrid/rossler.hpp"

using namespace cgrid;
using nlohmann::json;

namespace {

bool inside_closed(const AffineHSet& s, const Box& x) {
  const Box u = to_model_coords(s, x);
  for (std::size_t k = 0; k < u.size(); ++k)
    if (!subset(u[k], Interval(-s.radii[k].hi(), s.radii[k].hi()))) return false;
  return true;
}

GridRun fake_run(bool verified) {
  GridRun run;
  run.a = "5.25";
  run.grid = builtin_case("5.25").grid;
  run.report.verified = verified;
  for (int i = 0; i < 3; ++i) {
    InclusionReport r;
    r.status = CheckStatus::pass;
    r.what = "cube " + std::to_string(i + 1);
    r.margin = 0.01;
    run.report.cubes.push_back(r);
  }
  run.report.outer.status = CheckStatus::pass;
  run.report.outer.what = "outer set";
  run.report.outer.margin = 0.02;
  return run;
}

}  // namespace

TEST_CASE("grid patterns") {
  CHECK(grid_pattern(builtin_case("5.25").grid).to_string() == "2,3,1");
  // ordered along the outer exit axis, which points towards decreasing y
  CHECK(grid_pattern(builtin_case("4.7").grid).to_string() == "3,5,4,2,1");
  CHECK(grid_pattern(builtin_case("4.7").grid).reversed().to_string() == "5,4,2,1,3");
  CHECK(grid_pattern(builtin_case("4.381").grid).to_string() == "4,6,5,3,2,1");
  CHECK(grid_pattern(builtin_case("5.42").grid).reversed().to_string() == "6,5,1,2,3,4");
}

TEST_CASE("segments from loops") {
  const ContractingGridSpec g = builtin_case("5.42").grid;
  // mirror of the diagram loop [4,5] -> [2,3] -> [2,3]
  CoveringLoop loop;
  loop.k = {{2, 3}, {4, 5}, {4, 5}};
  const auto segs = segments_from_loop(g, loop);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].i == 2);
  CHECK(segs[0].j == 3);
  CHECK(segs[1].i == 4);
  const SpatialPattern sp = spatial_pattern(g);
  for (const auto& s : segs) {
    CHECK(inside_closed(g.outer, s.set.center));
    // the segment sits between the two cubes along the exit axis
    const Interval e = exit_extent(g.outer, s.set);
    CHECK(e.lo() >= exit_extent(g.outer, g.cubes[sp.cube_at[static_cast<std::size_t>(s.i - 1)]]).hi() - 1e-12);
    CHECK(e.hi() <= exit_extent(g.outer, g.cubes[sp.cube_at[static_cast<std::size_t>(s.j - 1)]]).lo() + 1e-12);
  }

  CoveringLoop one;
  one.k = {{4, 6}};
  CHECK(segments_from_loop(g, one).size() == 1);

  CoveringLoop bad;
  bad.k = {{0, 2}};
  CHECK_THROWS_AS(segments_from_loop(g, bad), std::invalid_argument);
  bad.k = {{5, 7}};
  CHECK_THROWS_AS(segments_from_loop(g, bad), std::invalid_argument);
  bad.k = {{3, 3}};
  CHECK_THROWS_AS(segments_from_loop(g, bad), std::invalid_argument);
}

TEST_CASE("segments of a non-repeating loop: the first has interior disjoint from the rest") {
  const ContractingGridSpec g = builtin_case("5.25").grid;
  const Pattern p = grid_pattern(g);
  for (int m : {2, 4, 5, 6, 7}) {  // m = 3 is the orbit itself
    CAPTURE(m);
    const auto loop = non_repeating_loop(p, m);
    REQUIRE(loop);
    const auto segs = segments_from_loop(g, *loop);
    REQUIRE(static_cast<int>(segs.size()) == m);
    const Interval first = exit_extent(g.outer, segs[0].set);
    for (std::size_t k = 1; k < segs.size(); ++k) {
      const Interval e = exit_extent(g.outer, segs[k].set);
      CHECK((e.lo() >= first.hi() - 1e-12 || e.hi() <= first.lo() + 1e-12));
    }
  }
}

TEST_CASE("FNV-1a 64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  const auto g = builtin_case("4.7").grid;
  CHECK(dataset_hash(g, "4.7").size() == 16);
  CHECK(dataset_hash(g, "4.7") != dataset_hash(g, "4.8"));
}

TEST_CASE("decimal boxes reread outward") {
  const Box b{Interval(0.1, 0.30000000000000004), Interval(-1.0 / 3.0, 2.0)};
  const Box r = box_from_json(box_json(b));
  CHECK(subset(b, r));
  CHECK(r.max_width() <= b.max_width() + 1e-15);
  CHECK_THROWS(box_from_json(json::parse(R"([{"lo": "2", "hi": "1"}])")));
}

TEST_CASE("witness JSON round trip") {
  const Pattern p = Pattern::parse("6,5,1,2,3,4");
  const ForcedPeriods fp = forced_periods(p, 12);
  for (const auto& w : fp.witnesses) {
    CAPTURE(w.m);
    const PeriodWitness back = witness_from_json(witness_json(w));
    CHECK(back.m == w.m);
    CHECK(back.orbit == w.orbit);
    CHECK(back.loop.has_value() == w.loop.has_value());
    if (w.loop) CHECK(back.loop->k == w.loop->k);
    CHECK(witness_valid(p, back));
  }
}

TEST_CASE("grid certificates") {
  CHECK_THROWS_AS(grid_certificate(fake_run(false), ForcedPeriods{}), std::logic_error);
  const GridRun run = fake_run(true);
  const Pattern p = grid_pattern(run.grid);
  json c = grid_certificate(run, forced_periods(p, 20));
  CHECK(c.at("schema") == "cgrid.certificate/1");
  CHECK(check_certificate(c).empty());

  json stamped = c;
  stamp(stamped, 1.5);
  CHECK(stamped.at("run").contains("timestamp"));
  CHECK(canonical_text(stamped) == canonical_text(c));

  json tampered = c;
  tampered["result"]["periods"].push_back(99);
  CHECK(!check_certificate(tampered).empty());
  tampered = c;
  tampered["checks"][0]["status"] = "inconclusive";
  CHECK(!check_certificate(tampered).empty());
  tampered = c;
  tampered["checks"][1]["margin"] = "-0.001";
  CHECK(!check_certificate(tampered).empty());
  tampered = c;
  tampered["result"]["pattern"] = "3,2,1";  // not a cycle
  CHECK(!check_certificate(tampered).empty());
  tampered = c;
  tampered["result"]["pattern"] = "3,1,2";  // a different 3-cycle: loops no longer hold
  CHECK(!check_certificate(tampered).empty());
}

TEST_CASE("failure reports are never certificates") {
  const json f = failure_report("grid_verified", "subdivision cap reached");
  CHECK(f.at("claim") == "none");
  CHECK(!check_certificate(f).empty());
}

TEST_CASE("orbit certificates") {
  OrbitRun run;
  run.a = "5.25";
  run.period = 2;
  CHECK_THROWS_AS(orbit_certificate(run), std::logic_error);
  run.enclosure.unique = true;
  run.enclosure.boxes = {Box{Interval(-3.5, -3.4), Interval(0.03, 0.04)}, Box{Interval(-6.3, -6.2), Interval(0.03, 0.04)}};
  run.printed = std::vector<Box>{Box{Interval(-4.0, -3.0), Interval(0.0, 1.0)}, Box{Interval(-6.25, -6.0), Interval(0.0, 1.0)}};
  const json c = orbit_certificate(run);
  CHECK(c.at("result").at("points")[0].at("inside_printed") == true);
  CHECK(c.at("result").at("points")[1].at("inside_printed") == false);
  CHECK(!check_certificate(c).empty());
  run.printed.reset();
  CHECK(check_certificate(orbit_certificate(run)).empty());
}
