// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// line fails. Usage: acceptance <path to cgrid binary>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cgrid/certificate.hpp"
#include "cgrid/flow.hpp"
#include "cgrid/rossler.hpp"
#include "cgrid/scanner.hpp"
#include "cgrid/shark.hpp"
#include "cgrid/taylor.hpp"

using namespace cgrid;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// pinned limits
constexpr double kGridSeconds = 600.0;    // per grid
constexpr double kOrbitSeconds = 300.0;   // per orbit
constexpr double kOracleSeconds = 300.0;  // whole sweep
constexpr double kOrbitWidth = 1e-8;
constexpr double kEWidth = 1e-10;
constexpr double kOscillatorWidth = 1e-8;
constexpr int kTrajectories = 100;
constexpr int kSampleTimes = 20;
constexpr int kCoveringInstances = 10000;
constexpr int kScanTransient = 200, kScanSamples = 100;
constexpr double kScanOffset = 1e-3;  // also a -/+ this

std::string g_cli;
fs::path g_dir;
int g_failed = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << "  (" << detail << ")" << std::endl;
  if (!ok) ++g_failed;
}

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << detail << ")" << std::endl;
  if (!ok) ++g_failed;
}

int run_cli(const std::string& args, double* seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const int st = std::system((g_cli + " " + args + " > /dev/null 2>&1").c_str());
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::set<int> range_set(int lo, int hi, const std::function<bool(int)>& keep = [](int) { return true; }) {
  std::set<int> s;
  for (int m = lo; m <= hi; ++m)
    if (keep(m)) s.insert(m);
  return s;
}

std::map<std::string, json> g_grid_certs;

void criterion_grids() {
  bool ok = true;
  std::ostringstream d;
  for (const auto& key : builtin_keys()) {
    const fs::path out = g_dir / ("grid_" + key + ".json");
    double secs = 0;
    const int code = run_cli("verify-grid --case " + key + " --out " + out.string(), &secs);
    double min_margin = INFINITY;
    bool cert_ok = false;
    if (code == 0) {
      const json c = json::parse(read_file(out.string()));
      cert_ok = c.at("claim") == "grid_verified" && check_certificate(c).empty();
      for (const auto& r : c.at("checks")) {
        const double m = std::stod(r.at("margin").get<std::string>());
        min_margin = std::fmin(min_margin, m);
        cert_ok = cert_ok && r.at("status") == "pass";
      }
      g_grid_certs[key] = c;
    }
    const bool here = code == 0 && cert_ok && min_margin > 0 && secs <= kGridSeconds;
    ok = ok && here;
    d << key << ": exit " << code << ", min margin " << min_margin << ", " << fmt(secs) << " s; ";
  }
  report(1, "grid re-verification for 5.25, 4.7, 4.381, 5.42", ok, d.str());
}

void criterion_orbits() {
  bool ok = true;
  std::ostringstream d;
  for (const char* key : {"4.381", "5.42"}) {
    const CaseStudy cs = builtin_case(key);
    const fs::path out = g_dir / (std::string("orbit_") + key + ".json");
    double secs = 0;
    const int code = run_cli(std::string("locate-orbit --case ") + key + " --out " + out.string(), &secs);
    int inside = 0;
    double width = 0;
    std::size_t count = 0;
    if (code == 0) {
      const json c = json::parse(read_file(out.string()));
      const auto& pts = c.at("result").at("points");
      count = pts.size();
      for (std::size_t i = 0; i < pts.size() && i < cs.orbit->inner.size(); ++i) {
        const Box b = box_from_json(pts[i].at("box"));
        width = std::fmax(width, b.max_width());
        // containment in the exact printed rectangle, checked here
        inside += subset(b, cs.orbit->inner[i]) ? 1 : 0;
      }
    }
    const bool here = code == 0 && count == 6 && inside == 6 && width <= kOrbitWidth && secs <= kOrbitSeconds;
    ok = ok && here;
    d << key << ": exit " << code << ", " << inside << "/6 inside, max width " << width << ", " << fmt(secs) << " s; ";
  }
  report(2, "orbit enclosures inside the printed rectangles", ok, d.str());
}

void criterion_periods() {
  bool ok = true;
  std::ostringstream d;
  const std::map<std::string, std::pair<std::set<int>, bool>> want{
      {"5.25", {range_set(1, 20), true}},
      {"4.7", {range_set(1, 20, [](int m) { return m != 3; }), false}},
      {"4.381", {range_set(1, 20, [](int m) { return m == 1 || m % 2 == 0; }), true}},
      {"5.42", {range_set(1, 20), true}},
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [key, w] : want) {
    const Pattern p = grid_pattern(builtin_case(key).grid);
    const ForcedPeriods fp = forced_periods(p, 20);
    bool witnesses = fp.witnesses.size() == fp.periods.size();
    for (const auto& x : fp.witnesses) witnesses = witnesses && witness_valid(p, x);
    const bool match = w.second ? fp.periods == w.first : std::includes(fp.periods.begin(), fp.periods.end(), w.first.begin(), w.first.end());
    // the certificates from criterion 1 must carry the same list
    bool cert = false;
    if (auto it = g_grid_certs.find(key); it != g_grid_certs.end()) {
      const auto listed = it->second.at("result").at("periods").get<std::vector<int>>();
      cert = std::set<int>(listed.begin(), listed.end()) == fp.periods;
    }
    ok = ok && match && witnesses && cert;
    d << key << " " << p.to_string() << (match ? " ok" : " MISMATCH") << (cert ? "" : " (certificate missing or differs)") << "; ";
  }
  d << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) << " s";
  report(3, "forced-period sets of the four grids", ok, d.str());
}

void criterion_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  long patterns = 0, bad = 0;
  for (int n = 1; n <= 7; ++n) {
    // all cyclic permutations via cycle orderings starting at 1
    std::vector<int> rest;
    for (int k = 2; k <= n; ++k) rest.push_back(k);
    do {
      std::vector<int> sigma(static_cast<std::size_t>(n));
      int cur = 1;
      for (int r : rest) {
        sigma[static_cast<std::size_t>(cur - 1)] = r;
        cur = r;
      }
      sigma[static_cast<std::size_t>(cur - 1)] = 1;
      const Pattern p(sigma);
      const std::set<int> tail = shark_successors(n, 12);
      const std::set<int> forced = forced_periods(p, 12).periods;
      const std::set<int> oracle = pl_oracle_periods(p, 12);
      const bool lower = std::includes(forced.begin(), forced.end(), tail.begin(), tail.end());
      const bool upper = std::includes(oracle.begin(), oracle.end(), forced.begin(), forced.end());
      if (!lower || !upper) ++bad;
      ++patterns;
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(4, "Sharkovskii tail <= forced periods <= piecewise linear model", bad == 0 && patterns == 874 && secs <= kOracleSeconds,
         std::to_string(patterns) + " patterns, " + std::to_string(bad) + " violations, " + fmt(secs) + " s");
}

void criterion_order() {
  long bad = 0;
  const int top = 64;
  for (int a = 1; a <= top; ++a) {
    if (shark_precedes(a, a)) ++bad;
    for (int b = 1; b <= top; ++b)
      if (a != b && shark_precedes(a, b) == shark_precedes(b, a)) ++bad;
  }
  for (int a = 1; a <= top; ++a)
    for (int b = 1; b <= top; ++b)
      if (shark_precedes(a, b))
        for (int c = 1; c <= top; ++c)
          if (shark_precedes(b, c) && !shark_precedes(a, c)) ++bad;
  for (int m = 1; m <= 1024; ++m) {
    if (m != 3 && !shark_precedes(3, m)) ++bad;
    if (m != 1 && !shark_precedes(m, 1)) ++bad;
  }
  for (int k = 0; k < 10; ++k)
    if (!shark_precedes(1 << (k + 1), 1 << k)) ++bad;
  // every number with an odd factor comes before every power of two
  for (int m = 1; m <= 1024; ++m)
    if ((m & (m - 1)) != 0)
      for (int k = 0; k <= 10; ++k)
        if (!shark_precedes(m, 1 << k)) ++bad;
  report(5, "Sharkovskii order suite", bad == 0, std::to_string(bad) + " violations over 1..64 triples and 1..1024 extremes");
}

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

void criterion_integrator() {
  std::ostringstream d;
  const PolyField expo(1, {{Monomial("1", {1})}});
  const Box e = flow_to(expo, LohnerSet::from_box(Box{Interval(1.0)}), 1.0).hull();
  const bool e_ok = e[0].contains(2.718281828459045) && e[0].contains(2.7182818284590455) && e[0].width() <= kEWidth;
  d << "e width " << e[0].width();

  const PolyField osc(2, {{Monomial("-1", {0, 1})}, {Monomial("1", {1, 0})}});
  const double t = 2 * std::numbers::pi;
  const Box h = flow_to(osc, LohnerSet::from_box(Box{Interval(0.0), Interval(-1.0)}), t).hull();
  // exact state at the double t: (sin t, -cos t)
  const long double tl = t;
  const long double sx = tl - 2 * 3.14159265358979323846264338327950288L;
  const bool osc_ok = static_cast<long double>(h[0].lo()) <= sx && sx <= static_cast<long double>(h[0].hi()) && h[1].contains(-1.0) &&
                      h.max_width() <= kOscillatorWidth;
  d << ", oscillator width " << h.max_width();

  const PolyField f = rossler_field("5.25");
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uy(-10.0, -3.0), uz(0.02, 0.05), ux(-1.0, 1.0);
  int contained = 0, total = 0;
  for (int trial = 0; trial < kTrajectories; ++trial) {
    const double x0[3] = {ux(rng), uy(rng), uz(rng)};
    LohnerSet s = LohnerSet::from_box(Box{Interval(x0[0]), Interval(x0[1]), Interval(x0[2])});
    std::vector<long double> ref(x0, x0 + 3);
    for (int k = 0; k < kSampleTimes; ++k) {
      s = flow_to(f, s, 0.3);
      ref = reference_flow(f, ref, 0.3L, 0.002L);
      const Box b = s.hull();
      bool in = true;
      for (std::size_t i = 0; i < 3; ++i) in = in && static_cast<long double>(b[i].lo()) <= ref[i] && ref[i] <= static_cast<long double>(b[i].hi());
      contained += in ? 1 : 0;
      ++total;
    }
  }
  d << ", Rossler " << contained << "/" << total << " samples contained";
  report(6, "integrator validation", e_ok && osc_ok && contained == total && total == kTrajectories * kSampleTimes, d.str());
}

void criterion_covering() {
  const AffineHSet s = AffineHSet::from_values(PVector::Zero(2), PMatrix::Identity(2, 2), PVector::Ones(2));
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> big(-4.0, 4.0), small(-0.3, 0.3), u01(0.0, 1.0);
  long passes = 0, bad = 0;
  auto shrink = [&](const Box& b) {
    Box r(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double a = b[k].lo() + 0.5 * b[k].width() * u01(rng);
      r[k] = Interval(a, b[k].hi() - 0.5 * (b[k].hi() - a) * u01(rng));
    }
    return r;
  };
  for (int trial = 0; trial < kCoveringInstances; ++trial) {
    // image of the unit square under x -> A x + b
    IMatrix a(2, 2);
    a(0, 0) = Interval(big(rng));
    a(0, 1) = Interval(small(rng));
    a(1, 0) = Interval(small(rng) * 0.5);
    a(1, 1) = Interval(small(rng) * 0.5);
    Box b{Interval(small(rng)), Interval(small(rng) * 0.5)};
    const Interval unit(-1.0, 1.0);
    const Box whole = a * Box{unit, unit} + b;
    const Box left = a * Box{Interval(-1.0), unit} + b;
    const Box right = a * Box{Interval(1.0), unit} + b;
    const InclusionReport rep = check_horizontal_covering(s, whole, left, right);
    const bool plain = left[0].hi() < -1 && right[0].lo() > 1 && whole[1].mag() < 1;
    const bool mirror = left[0].lo() > 1 && right[0].hi() < -1 && whole[1].mag() < 1;
    if (plain && mirror) ++bad;
    if (rep.status == CheckStatus::pass) {
      ++passes;
      if (!(rep.swapped ? mirror : plain)) ++bad;
      const InclusionReport again = check_horizontal_covering(s, shrink(whole), shrink(left), shrink(right));
      if (again.status != CheckStatus::pass || again.swapped != rep.swapped) ++bad;
    }
  }
  report(7, "covering checks: monotone under shrinking, orientation exclusive", bad == 0 && passes >= 100,
         std::to_string(kCoveringInstances) + " affine instances, " + std::to_string(passes) + " coverings, " + std::to_string(bad) + " violations");
}

void scanner_clusters() {
  const std::pair<double, std::size_t> want[] = {{5.25, 3}, {4.7, 5}, {4.381, 6}, {5.42, 6}};
  bool ok = true;
  std::ostringstream d;
  for (auto [a, n] : want) {
    d << "a=" << a << ":";
    for (double da : {-kScanOffset, 0.0, kScanOffset}) {
      const std::size_t got = cluster_centers(section_returns(a + da, kScanTransient, kScanSamples), kClusterGap).size();
      ok = ok && got == n;
      d << ' ' << got;
    }
    d << " (want " << n << "); ";
  }
  d << "gap " << kClusterGap;
  report("scanner: cluster counts near the four parameters", ok, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <cgrid binary>\n";
    return 2;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() / ("cgrid_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);
  criterion_grids();
  criterion_orbits();
  criterion_periods();
  criterion_oracle();
  criterion_order();
  criterion_integrator();
  criterion_covering();
  scanner_clusters();
  std::cout << (g_failed == 0 ? "all criteria pass" : std::to_string(g_failed) + " criteria failed") << std::endl;
  return g_failed == 0 ? 0 : 1;
}
