// cgrid: verify contracting grids, certify periodic orbits, list forced
// periods, and emit (non-rigorous) bifurcation data.
//
// Exit codes: 0 verified, 1 inconclusive, 2 input error.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cgrid/certificate.hpp"
#include "cgrid/decimal.hpp"
#include "cgrid/poincare.hpp"
#include "cgrid/rossler.hpp"
#include "cgrid/scanner.hpp"

using namespace cgrid;
using nlohmann::json;

namespace {

constexpr int kVerified = 0, kInconclusive = 1, kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_out(const std::string& path, json doc, double wall) {
  if (path.empty()) return;
  stamp(doc, wall);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

std::string join(const std::set<int>& s) {
  std::string out;
  for (int m : s) out += (out.empty() ? "" : ",") + std::to_string(m);
  return out;
}

std::string box_text(const Box& b) {
  std::ostringstream os;
  for (std::size_t k = 0; k < b.size(); ++k) os << (k ? " x " : "") << '[' << format_double(b[k].lo()) << ", " << format_double(b[k].hi()) << ']';
  return os.str();
}

void check_decimal(const std::string& a) {
  try {
    if (!(parse_decimal(a).lo() > 0)) throw InputError("parameter a must be positive");
  } catch (const std::invalid_argument&) {
    throw InputError("parameter a must be a decimal literal, got '" + a + "'");
  }
}

struct VerifyArgs {
  std::string grid, key, a, out;
  int order = 20, max_subdiv = 12, max_period = 20, threads = 0;
};

int verify_grid(const VerifyArgs& args) {
  ContractingGridSpec g;
  std::string a = args.a;
  if (!args.key.empty()) {
    const CaseStudy cs = builtin_case(args.key);
    g = cs.grid;
    if (a.empty()) a = cs.a;
  } else {
    std::string file_a;
    g = grid_from_json(read_file(args.grid), &file_a);
    if (a.empty()) a = file_a;
  }
  if (a.empty()) throw InputError("grid file has no \"a\"; pass --a");
  check_decimal(a);
  if (args.order < 2 || args.order > 60) throw InputError("--taylor-order must be in 2..60");
  if (args.max_subdiv < 0 || args.max_subdiv > 30) throw InputError("--max-subdiv must be in 0..30");
  if (args.max_period < 1 || args.max_period > 64) throw InputError("--max-period must be in 1..64");

  GridRun run;
  run.a = a;
  run.grid = g;
  run.step.order = args.order;
  run.subdivision.max_depth = args.max_subdiv;
  run.subdivision.outer_max_depth = args.max_subdiv;
  run.subdivision.threads = args.threads;
  run.max_period = args.max_period;

  const auto t0 = std::chrono::steady_clock::now();
  run.report = verify_contracting_grid(g, poincare_evaluator(SectionDef::rossler(), rossler_field(a), run.step), run.subdivision);
  std::cout << "grid " << g.name << " (a=" << a << ", " << g.cubes.size() << " cubes, hash " << dataset_hash(g, a) << ")\n";
  std::vector<const InclusionReport*> done;
  for (const auto& r : run.report.cubes) done.push_back(&r);
  if (run.report.cubes.size() == g.cubes.size() && run.report.cubes.back().status == CheckStatus::pass) done.push_back(&run.report.outer);
  for (const InclusionReport* r : done)
    std::cout << "  " << to_string(r->status) << "  " << r->what << "  margin " << format_double(r->margin) << "  depth " << r->depth << "  boxes " << r->boxes << '\n';

  if (!run.report.verified) {
    const InclusionReport& bad = *done.back();
    std::cout << "inconclusive: " << bad.what << '\n';
    json detail{{"checks", json::array()}};
    for (const InclusionReport* r : done) detail["checks"].push_back(report_json(*r));
    if (bad.offending) std::cout << "  offending model box " << box_text(*bad.offending) << '\n';
    write_out(args.out, failure_report("grid_verified", bad.what, detail), seconds_since(t0));
    return kInconclusive;
  }

  const Pattern p = grid_pattern(g);
  const ForcedPeriods fp = forced_periods(p, args.max_period);
  for (const auto& w : fp.witnesses)
    if (!witness_valid(p, w)) throw std::logic_error("witness for m=" + std::to_string(w.m) + " failed re-validation");
  std::cout << "verified: contracting grid\n";
  std::cout << "pattern " << p.to_string() << '\n';
  std::cout << "forced periods (m <= " << args.max_period << "): " << join(fp.periods) << '\n';
  write_out(args.out, grid_certificate(run, fp), seconds_since(t0));
  return kVerified;
}

struct OrbitArgs {
  std::string key, a, guess, out;
  int period = 0;
  double tol = 1e-12;
};

std::vector<PVector> read_guess(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<PVector> pts;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("guess file: ") + e.what());
  }
  if (j.contains("boxes")) {
    for (const Box& b : orbit_from_json(text).boxes) {
      PVector v(2);
      v << b[0].mid(), b[1].mid();
      pts.push_back(v);
    }
    return pts;
  }
  try {
    for (const auto& p : j.at("points")) {
      if (p.size() != 2) throw InputError("guess points must have two coordinates");
      PVector v(2);
      for (int k = 0; k < 2; ++k) v[k] = p[static_cast<std::size_t>(k)].is_string() ? parse_decimal(p[static_cast<std::size_t>(k)].get<std::string>()).mid() : p[static_cast<std::size_t>(k)].get<double>();
      pts.push_back(v);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("guess file: ") + e.what());
  }
  return pts;
}

int locate_orbit(const OrbitArgs& args) {
  OrbitRun run;
  std::vector<PVector> guess;
  std::optional<OrbitBoxes> printed;
  if (!args.key.empty()) {
    const CaseStudy cs = builtin_case(args.key);
    run.a = cs.a;
    run.period = cs.period;
    guess = cs.orbit_guess;
    printed = cs.orbit;
  } else {
    if (args.a.empty() || args.period < 1 || args.guess.empty()) throw InputError("give --case, or --a, --period and --guess");
    run.a = args.a;
    run.period = args.period;
    guess = read_guess(args.guess);
  }
  check_decimal(run.a);
  if (static_cast<int>(guess.size()) != run.period) throw InputError("guess has " + std::to_string(guess.size()) + " points for period " + std::to_string(run.period));
  if (!(args.tol > 0)) throw InputError("--tol must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const SectionDef sec = SectionDef::rossler();
  const PolyField f = rossler_field(run.a);
  double residual = INFINITY;
  std::vector<PVector> refined;
  try {
    refined = refine_orbit_double(sec, f, guess, args.tol, 40, &residual);
  } catch (const Inconclusive& e) {
    std::cout << "inconclusive: refinement failed (" << e.what() << ")\n";
    write_out(args.out, failure_report("orbit_certified", std::string("refinement failed: ") + e.what()), seconds_since(t0));
    return kInconclusive;
  }
  std::cout << "refined residual " << format_double(residual) << '\n';
  if (!(residual <= args.tol)) {
    std::cout << "inconclusive: refinement residual above --tol\n";
    write_out(args.out, failure_report("orbit_certified", "refinement residual " + format_double(residual) + " above tolerance"), seconds_since(t0));
    return kInconclusive;
  }
  try {
    run.enclosure = interval_newton_orbit(sec, f, run.period, refined, NewtonPolicy{}, run.step);
  } catch (const Inconclusive& e) {
    std::cout << "inconclusive: " << e.what() << '\n';
    write_out(args.out, failure_report("orbit_certified", e.what()), seconds_since(t0));
    return kInconclusive;
  }
  // pairwise disjoint boxes are needed for the least period to be the period
  for (std::size_t i = 0; i < run.enclosure.boxes.size(); ++i)
    for (std::size_t j = i + 1; j < run.enclosure.boxes.size(); ++j)
      if (intersect(run.enclosure.boxes[i][0], run.enclosure.boxes[j][0]) && intersect(run.enclosure.boxes[i][1], run.enclosure.boxes[j][1])) {
        std::cout << "inconclusive: points " << i + 1 << " and " << j + 1 << " are not separated\n";
        write_out(args.out, failure_report("orbit_certified", "orbit points not separated; least period not established"), seconds_since(t0));
        return kInconclusive;
      }
  if (printed) {
    run.printed = printed->inner;
    for (std::size_t i = 0; i < printed->inner.size(); ++i)
      if (!subset(run.enclosure.boxes[i], printed->inner[i])) {
        std::cout << "inconclusive: point " << i + 1 << " is not inside the printed enclosure\n";
        write_out(args.out, failure_report("orbit_certified", "enclosure not inside the printed box " + std::to_string(i + 1)), seconds_since(t0));
        return kInconclusive;
      }
  }
  std::cout << "certified: unique " << run.period << "-periodic orbit (a=" << run.a << ")\n";
  for (std::size_t i = 0; i < run.enclosure.boxes.size(); ++i)
    std::cout << "  p" << i + 1 << "  " << box_text(run.enclosure.boxes[i]) << "  width " << format_double(run.enclosure.boxes[i].max_width())
              << (printed ? "  inside printed" : "") << '\n';
  write_out(args.out, orbit_certificate(run), seconds_since(t0));
  return kVerified;
}

struct PeriodArgs {
  std::string pattern, key, out;
  int max = 20;
  bool oracle = false, witnesses = false;
};

int forced(const PeriodArgs& args) {
  Pattern p;
  try {
    p = args.key.empty() ? Pattern::parse(args.pattern) : grid_pattern(builtin_case(args.key).grid);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (args.max < 1 || args.max > 64) throw InputError("--max must be in 1..64");
  const ForcedPeriods fp = forced_periods(p, args.max);
  std::cout << "pattern " << p.to_string() << '\n';
  std::cout << "forced periods (m <= " << args.max << "): " << join(fp.periods) << '\n';
  if (args.witnesses)
    for (const auto& w : fp.witnesses)
      std::cout << "  m=" << w.m << "  " << (w.loop ? w.loop->to_string() : std::string("the orbit itself")) << '\n';
  int code = kVerified;
  if (args.oracle) {
    try {
      const std::set<int> o = pl_oracle_periods(p, args.max);
      std::cout << "oracle periods: " << join(o) << '\n';
      const bool sub = std::includes(o.begin(), o.end(), fp.periods.begin(), fp.periods.end());
      std::cout << "oracle check: " << (sub ? "consistent" : "MISMATCH") << '\n';
      if (!sub) code = kInconclusive;
    } catch (const std::length_error& e) {
      std::cout << "oracle refused: " << e.what() << '\n';
    }
  }
  write_out(args.out, forced_certificate(p, fp, args.max), 0.0);
  return code;
}

int scan(const ScanParams& p, const std::string& out) {
  std::string csv;
  try {
    csv = scan_csv(scan_bifurcation(p));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + out + "'");
    f << csv;
  }
  return kVerified;
}

int check(const std::string& path) {
  json cert;
  try {
    cert = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  const auto bad = check_certificate(cert);
  for (const auto& b : bad) std::cout << "problem: " << b << '\n';
  std::cout << (bad.empty() ? "certificate checks out\n" : "certificate rejected\n");
  return bad.empty() ? kVerified : kInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contracting grids and forced periods for Roessler return maps"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* vg = app.add_subcommand("verify-grid", "verify a contracting grid and list the periods it forces");
  auto* vg_grid = vg->add_option("--grid", va.grid, "grid JSON file");
  auto* vg_case = vg->add_option("--case", va.key, "built-in case: 5.25, 4.7, 4.381, 5.42");
  vg_grid->excludes(vg_case);
  vg->add_option("--a", va.a, "parameter a (overrides the grid file)");
  vg->add_option("--taylor-order", va.order, "Taylor order")->default_val(20);
  vg->add_option("--max-subdiv", va.max_subdiv, "bisection depth cap")->default_val(12);
  vg->add_option("--max-period", va.max_period, "largest period listed")->default_val(20);
  vg->add_option("--threads", va.threads, "worker threads (0: CGRID_THREADS or hardware)")->default_val(0);
  vg->add_option("--out", va.out, "certificate or failure report");

  OrbitArgs oa;
  auto* lo = app.add_subcommand("locate-orbit", "certify a periodic orbit by interval Newton");
  lo->add_option("--case", oa.key, "built-in case");
  lo->add_option("--a", oa.a, "parameter a");
  lo->add_option("--period", oa.period, "period");
  lo->add_option("--guess", oa.guess, "JSON with \"points\" [[y,z],...] or orbit boxes");
  lo->add_option("--tol", oa.tol, "residual required of the refinement")->default_val(1e-12);
  lo->add_option("--out", oa.out, "certificate or failure report");

  PeriodArgs pa;
  auto* fpc = app.add_subcommand("forced-periods", "periods forced by a cyclic pattern");
  auto* fp_pat = fpc->add_option("--pattern", pa.pattern, "images s1,...,sn");
  auto* fp_case = fpc->add_option("--case", pa.key, "pattern of a built-in grid");
  fp_pat->excludes(fp_case);
  fpc->add_option("--max", pa.max, "largest period")->default_val(20);
  fpc->add_flag("--oracle", pa.oracle, "cross-check with the piecewise linear model");
  fpc->add_flag("--witnesses", pa.witnesses, "print a loop per period");
  fpc->add_option("--out", pa.out, "certificate");

  ScanParams sp;
  std::string scan_out;
  auto* sc = app.add_subcommand("scan-bifurcation", "non-rigorous bifurcation data as CSV");
  sc->add_option("--a-min", sp.a_min)->required();
  sc->add_option("--a-max", sp.a_max)->required();
  sc->add_option("--step", sp.step)->default_val(0.01);
  sc->add_option("--transient", sp.transient, "returns discarded")->default_val(200);
  sc->add_option("--samples", sp.samples, "returns recorded")->default_val(100);
  sc->add_option("--threads", sp.threads)->default_val(0);
  sc->add_option("--out", scan_out, "CSV file (default stdout)");

  std::string cert_in;
  auto* cc = app.add_subcommand("check-certificate", "re-validate a certificate");
  cc->add_option("--in", cert_in, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (vg->parsed()) {
      if (va.grid.empty() == va.key.empty()) throw InputError("give exactly one of --grid and --case");
      return verify_grid(va);
    }
    if (lo->parsed()) return locate_orbit(oa);
    if (fpc->parsed()) {
      if (pa.pattern.empty() == pa.key.empty()) throw InputError("give exactly one of --pattern and --case");
      return forced(pa);
    }
    if (sc->parsed()) return scan(sp, scan_out);
    if (cc->parsed()) return check(cert_in);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Inconclusive& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  }
  return kInputError;
}
