#include "cgrid/scanner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "cgrid/decimal.hpp"
#include "cgrid/hsets.hpp"

namespace cgrid {

namespace {

using State = std::array<double, 3>;
namespace ode = boost::numeric::odeint;

}  // namespace

std::vector<double> section_returns(double a, int transient, int samples) {
  auto field = [a](const State& s, State& d, double) {
    d[0] = -s[1] - s[2];
    d[1] = s[0] + 0.2 * s[1];
    d[2] = s[0] * s[2] - a * s[2] + 0.2;
  };
  auto stepper = ode::make_dense_output(1e-11, 1e-11, ode::runge_kutta_dopri5<State>());
  stepper.initialize(State{0.0, -6.0, 0.03}, 0.0, 0.01);
  std::vector<double> out;
  int returns = 0;
  const double t_max = 100.0 * (transient + samples + 10);
  while (static_cast<int>(out.size()) < samples) {
    const State prev = stepper.current_state();
    stepper.do_step(field);
    if (stepper.current_time() > t_max) throw std::runtime_error("scanner: no section returns");
    const State cur = stepper.current_state();
    if (!(prev[0] < 0 && cur[0] >= 0)) continue;
    double lo = stepper.previous_time(), hi = stepper.current_time();
    State mid = cur;
    for (int k = 0; k < 60; ++k) {
      const double t = 0.5 * (lo + hi);
      stepper.calc_state(t, mid);
      (mid[0] < 0 ? lo : hi) = t;
    }
    stepper.calc_state(hi, mid);
    if (mid[1] >= 0) continue;
    if (++returns > transient) out.push_back(mid[1]);
  }
  return out;
}

std::vector<BifurcationSample> scan_bifurcation(const ScanParams& p) {
  if (!std::isfinite(p.a_min) || !std::isfinite(p.a_max) || !std::isfinite(p.step)) throw std::invalid_argument("scan range must be finite");
  if (p.a_max < p.a_min) throw std::invalid_argument("a-max below a-min");
  if (p.a_max > p.a_min && !(p.step > 0)) throw std::invalid_argument("step must be positive");
  if (p.transient < 0 || p.samples < 1) throw std::invalid_argument("need transient >= 0 and samples >= 1");
  std::vector<double> as;
  if (p.a_max == p.a_min) {
    as.push_back(p.a_min);
  } else {
    const long n = std::lround(std::floor((p.a_max - p.a_min) / p.step + 1e-9));
    if (n > 1'000'000) throw std::invalid_argument("scan range too fine");
    for (long i = 0; i <= n; ++i) as.push_back(p.a_min + static_cast<double>(i) * p.step);
  }
  return parallel_map<BifurcationSample>(
      as.size(), [&](std::size_t i) { return BifurcationSample{as[i], section_returns(as[i], p.transient, p.samples)}; },
      worker_threads(p.threads));
}

std::string scan_csv(const std::vector<BifurcationSample>& s) {
  std::ostringstream os;
  os << "# Roessler b=0.2, section x=0 y<0 x'>0\n";
  os << "# NON-RIGOROUS: floating point dopri5, not part of any certificate\n";
  os << "a,y\n";
  for (const auto& b : s)
    for (double y : b.y) os << format_double(b.a) << ',' << format_double(y) << '\n';
  return os.str();
}

std::vector<double> cluster_centers(std::vector<double> y, double gap) {
  std::sort(y.begin(), y.end());
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i + 1 == y.size() || y[i + 1] - y[i] > gap) {
      double sum = 0;
      for (std::size_t k = start; k <= i; ++k) sum += y[k];
      out.push_back(sum / static_cast<double>(i + 1 - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace cgrid
