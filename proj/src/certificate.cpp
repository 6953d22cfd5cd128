#include "cgrid/certificate.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "cgrid/decimal.hpp"
#include "cgrid/rossler.hpp"

namespace cgrid {

using nlohmann::json;

Pattern grid_pattern(const ContractingGridSpec& g) { return Pattern(spatial_pattern(g).sigma); }

std::vector<SegmentHSet> segments_from_loop(const ContractingGridSpec& g, const CoveringLoop& loop) {
  const int n = static_cast<int>(g.cubes.size());
  std::vector<std::pair<int, int>> iv;
  for (const OInterval& k : loop.k) {
    if (k.i < 1 || k.j > n || k.i >= k.j) throw std::invalid_argument("loop interval [" + std::to_string(k.i) + "," + std::to_string(k.j) + "] outside the grid");
    iv.emplace_back(k.i, k.j);
  }
  return segments_from_intervals(g, iv);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string dataset_hash(const ContractingGridSpec& g, const std::string& a) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(grid_to_json(g, a))));
  return buf;
}

json interval_json(const Interval& x) { return json{{"lo", format_double(x.lo())}, {"hi", format_double(x.hi())}}; }

json box_json(const Box& b) {
  json out = json::array();
  for (std::size_t k = 0; k < b.size(); ++k) out.push_back(interval_json(b[k]));
  return out;
}

Box box_from_json(const json& j) {
  Box b(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    // outward: each decimal is enclosed, keep the outer ends
    const Interval lo = parse_decimal(j[k].at("lo").get<std::string>());
    const Interval hi = parse_decimal(j[k].at("hi").get<std::string>());
    if (lo.lo() > hi.hi()) throw std::invalid_argument("interval with lo > hi");
    b[k] = Interval(lo.lo(), hi.hi());
  }
  return b;
}

json report_json(const InclusionReport& r) {
  json j{{"check", r.what}, {"status", to_string(r.status)}, {"margin", format_double(r.margin)}, {"depth", r.depth}, {"boxes", r.boxes}};
  if (r.offending) j["offending_model_box"] = box_json(*r.offending);
  return j;
}

namespace {

json loop_json(const CoveringLoop& l) {
  json k = json::array();
  for (const OInterval& v : l.k) k.push_back({v.i, v.j});
  return json{{"intervals", k}, {"proper", l.proper}, {"non_repeating", l.non_repeating}, {"origin", l.origin}};
}

CoveringLoop loop_from(const json& j) {
  CoveringLoop l;
  for (const auto& v : j.at("intervals")) l.k.push_back(OInterval{v.at(0).get<int>(), v.at(1).get<int>()});
  l.proper = j.at("proper").get<bool>();
  l.non_repeating = j.at("non_repeating").get<bool>();
  l.origin = j.value("origin", "");
  return l;
}

json periods_json(const Pattern& p, const ForcedPeriods& fp, int max_period) {
  json w = json::array();
  for (const auto& x : fp.witnesses) w.push_back(witness_json(x));
  return json{{"pattern", p.to_string()}, {"max_period", max_period}, {"periods", std::vector<int>(fp.periods.begin(), fp.periods.end())}, {"witnesses", w}};
}

json header(const std::string& claim) { return json{{"schema", kCertificateSchema}, {"tool_version", kToolVersion}, {"claim", claim}}; }

json system_json(const std::string& a) { return json{{"name", "rossler"}, {"a", a}, {"b", "0.2"}, {"section", "x = 0, y < 0, x' > 0"}}; }

void check_periods(const json& payload, std::vector<std::string>& bad) {
  const Pattern p = Pattern::parse(payload.at("pattern").get<std::string>());
  const auto periods = payload.at("periods").get<std::vector<int>>();
  const int max_period = payload.at("max_period").get<int>();
  std::vector<int> seen;
  for (const auto& wj : payload.at("witnesses")) {
    const PeriodWitness w = witness_from_json(wj);
    seen.push_back(w.m);
    if (w.m < 1 || w.m > max_period) bad.push_back("witness period " + std::to_string(w.m) + " out of range");
    if (!witness_valid(p, w)) bad.push_back("witness for m=" + std::to_string(w.m) + " does not re-validate");
  }
  if (seen != periods) bad.push_back("period list does not match the witnesses");
}

}  // namespace

json witness_json(const PeriodWitness& w) {
  json j{{"m", w.m}};
  if (w.loop) j["loop"] = loop_json(*w.loop);
  if (w.orbit) j["orbit"] = true;
  return j;
}

PeriodWitness witness_from_json(const json& j) {
  PeriodWitness w;
  w.m = j.at("m").get<int>();
  if (j.contains("loop")) w.loop = loop_from(j.at("loop"));
  w.orbit = j.value("orbit", false);
  return w;
}

json step_policy_json(const StepPolicy& p) {
  return json{{"method", "Taylor-Lohner"},           {"order", p.order},          {"tolerance", format_double(p.tolerance)},
              {"h_min", format_double(p.h_min)},     {"h_max", format_double(p.h_max)}, {"fixed_step", format_double(p.fixed_step)}};
}

json grid_certificate(const GridRun& run, const ForcedPeriods& periods) {
  if (!run.report.verified) throw std::logic_error("grid did not verify; write a failure report instead");
  json c = header("grid_verified");
  c["system"] = system_json(run.a);
  c["dataset"] = {{"name", run.grid.name}, {"hash", dataset_hash(run.grid, run.a)}, {"cubes", run.grid.cubes.size()}};
  c["policy"] = {{"integrator", step_policy_json(run.step)},
                 {"max_subdivision", run.subdivision.max_depth},
                 {"outer_max_subdivision", run.subdivision.outer_max_depth}};
  json checks = json::array();
  for (const auto& r : run.report.cubes) checks.push_back(report_json(r));
  checks.push_back(report_json(run.report.outer));
  c["checks"] = checks;
  c["result"] = periods_json(grid_pattern(run.grid), periods, run.max_period);
  return c;
}

json orbit_certificate(const OrbitRun& run) {
  if (!run.enclosure.unique) throw std::logic_error("orbit not certified; write a failure report instead");
  json c = header("orbit_certified");
  c["system"] = system_json(run.a);
  c["policy"] = {{"integrator", step_policy_json(run.step)}};
  json boxes = json::array();
  for (std::size_t i = 0; i < run.enclosure.boxes.size(); ++i) {
    json b{{"box", box_json(run.enclosure.boxes[i])}, {"max_width", format_double(run.enclosure.boxes[i].max_width())}};
    if (run.printed) b["inside_printed"] = subset(run.enclosure.boxes[i], (*run.printed)[i]);
    boxes.push_back(b);
  }
  c["result"] = {{"period", run.period}, {"unique", true}, {"iterations", run.enclosure.iterations}, {"points", boxes}};
  return c;
}

json forced_certificate(const Pattern& p, const ForcedPeriods& periods, int max_period) {
  json c = header("forced_periods");
  c["result"] = periods_json(p, periods, max_period);
  return c;
}

json failure_report(const std::string& kind, const std::string& reason, const json& detail) {
  json c{{"schema", kCertificateSchema}, {"tool_version", kToolVersion}, {"claim", "none"}, {"attempted", kind}, {"reason", reason}};
  if (!detail.is_null()) c["detail"] = detail;
  return c;
}

void stamp(json& cert, double wall_seconds) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  cert["run"] = {{"timestamp", buf}, {"wall_seconds", wall_seconds}};
}

std::string canonical_text(const json& cert) {
  json c = cert;
  c.erase("run");
  return c.dump(2) + "\n";
}

std::vector<std::string> check_certificate(const json& cert) {
  std::vector<std::string> bad;
  try {
    if (cert.at("schema") != kCertificateSchema) bad.push_back("unknown schema");
    const std::string claim = cert.at("claim").get<std::string>();
    if (claim == "grid_verified") {
      for (const auto& r : cert.at("checks"))
        if (r.at("status") != "pass" || !(parse_decimal(r.at("margin").get<std::string>()).lo() > 0)) bad.push_back("check '" + r.at("check").get<std::string>() + "' did not pass");
      check_periods(cert.at("result"), bad);
    } else if (claim == "forced_periods") {
      check_periods(cert.at("result"), bad);
    } else if (claim == "orbit_certified") {
      const auto& res = cert.at("result");
      if (!res.at("unique").get<bool>()) bad.push_back("orbit not unique");
      if (res.at("points").size() != res.at("period").get<std::size_t>()) bad.push_back("point count differs from the period");
      for (const auto& p : res.at("points")) {
        box_from_json(p.at("box"));
        if (p.contains("inside_printed") && !p.at("inside_printed").get<bool>()) bad.push_back("box outside the printed enclosure");
      }
    } else {
      bad.push_back("no claim");
    }
  } catch (const std::exception& e) {
    bad.push_back(std::string("malformed certificate: ") + e.what());
  }
  return bad;
}

}  // namespace cgrid
