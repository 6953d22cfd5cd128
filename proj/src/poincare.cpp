#include "cgrid/poincare.hpp"

#include <cmath>

#include "cgrid/taylor.hpp"

namespace cgrid {

namespace {

constexpr int kMaxSteps = 20000;

std::vector<std::size_t> section_coords(const SectionDef& sec, std::size_t d) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d; ++i)
    if (i != sec.normal) idx.push_back(i);
  return idx;
}

void trust_check(const SectionDef& sec, const Box& z) {
  if (!z.is_finite()) throw Inconclusive(FailCode::left_trust_region, "enclosure is not finite");
  if (sec.trust.size() == 0) return;
  if (!subset(z, sec.trust)) throw Inconclusive(FailCode::left_trust_region, "trajectory left the trust region");
}

// sign-adjusted tests: "pre" is the side before a crossing, "post" after
bool strictly_post(const SectionDef& sec, const Interval& x) { return sec.direction > 0 ? x.lo() > 0 : x.hi() < 0; }
bool strictly_pre(const SectionDef& sec, const Interval& x) { return sec.direction > 0 ? x.hi() < 0 : x.lo() > 0; }
bool transversal(const SectionDef& sec, const Interval& fn) { return sec.direction > 0 ? fn.lo() > 0 : fn.hi() < 0; }
bool in_half(const SectionDef& sec, const Interval& x) { return sec.half_sign < 0 ? x.hi() < 0 : x.lo() > 0; }
bool off_half(const SectionDef& sec, const Interval& x) { return sec.half_sign < 0 ? x.lo() > 0 : x.hi() < 0; }

Interval conv0(const Interval& a) { return Interval(std::fmin(0.0, a.lo()), std::fmax(0.0, a.hi())); }

// Non-rigorous estimate of the time in [0, h] at which the point p hits the
// section plane.
double crossing_time_estimate(const SectionDef& sec, const PolyField& field, const PVector& p, double h) {
  const auto n = static_cast<Eigen::Index>(sec.normal);
  double lo = 0.0, hi = h;
  double flo = flow_double(field, p, lo)[n] * sec.direction;
  double s = 0.5 * h;
  for (int it = 0; it < 60; ++it) {
    const PVector q = flow_double(field, p, s);
    const double g = q[n] * sec.direction;
    if (g < 0) {
      lo = s;
      flo = g;
    } else {
      hi = s;
    }
    const double speed = field.eval(q)[n] * sec.direction;
    double s_new = speed > 0 ? s - g / speed : 0.5 * (lo + hi);
    if (!(s_new > lo && s_new < hi)) s_new = 0.5 * (lo + hi);
    if (std::fabs(s_new - s) < 1e-15 * (1 + h)) {
      s = s_new;
      break;
    }
    s = s_new;
  }
  (void)flo;
  return std::clamp(s, 1e-3 * h, (1 - 1e-3) * h);
}

}  // namespace

SectionDef SectionDef::rossler() {
  SectionDef s;
  s.trust = Box{Interval(-50, 50), Interval(-50, 50), Interval(-10, 100)};
  return s;
}

SectionDef SectionDef::plane(std::size_t d) {
  SectionDef s;
  if (d < 2) throw std::invalid_argument("section needs dimension >= 2");
  return s;
}

Box SectionDef::embed(const Box& s) const {
  const std::size_t d = s.size() + 1;
  Box x(d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) x[i] = i == normal ? Interval(0.0) : s[k++];
  return x;
}

IMatrix SectionDef::embedding(std::size_t d) const {
  IMatrix e(d, d - 1);
  const auto idx = section_coords(*this, d);
  for (std::size_t k = 0; k < idx.size(); ++k) e(idx[k], k) = Interval(1.0);
  return e;
}

ReturnResult poincare_image(const SectionDef& sec, const PolyField& field, const Box& c, const IMatrix& m, const Box& u,
                            const StepPolicy& policy, bool with_derivative) {
  const std::size_t d = field.dim();
  const std::size_t n = sec.normal;
  if (c.size() + 1 != d || m.rows() + 1 != d || m.cols() != u.size()) throw std::invalid_argument("poincare_image: dimension mismatch");
  const IMatrix emb = sec.embedding(d);
  LohnerSet s = LohnerSet::from_affine(sec.embed(c), emb * m, u);
  std::optional<VariationalSet> v;
  if (with_derivative) v = VariationalSet::identity(d);
  VariationalSet* vp = v ? &*v : nullptr;

  const Box x0 = s.hull();
  trust_check(sec, x0);
  if (!in_half(sec, x0[sec.half])) throw Inconclusive(FailCode::lost_transversality, "initial set not inside the section half");
  if (!transversal(sec, field.eval(x0)[n])) throw Inconclusive(FailCode::lost_transversality, "flow not transversal on the initial set");

  Interval t(0.0);
  int steps = 0;
  // leave the section: the normal coordinate is monotone until strictly past it
  for (;;) {
    if (++steps > kMaxSteps) throw Inconclusive(FailCode::step_underflow, "too many steps");
    const StepResult r = one_step(field, s, policy, vp);
    trust_check(sec, r.apriori);
    if (!transversal(sec, field.eval(r.apriori)[n])) throw Inconclusive(FailCode::lost_transversality, "lost transversality while leaving the section");
    t += Interval(r.h);
    if (strictly_post(sec, r.enclosure[n])) break;
  }

  for (;;) {
    const LohnerSet before = s;
    const std::optional<VariationalSet> vbefore = v;
    double h_req = 0.0;
    StepResult r;
    bool crossing = false;
    for (int retry = 0;; ++retry) {
      if (++steps > kMaxSteps) throw Inconclusive(FailCode::step_underflow, "too many steps");
      r = one_step(field, s, policy, vp, h_req);
      trust_check(sec, r.apriori);
      const Box& z = r.apriori;
      if (z[n].lo() > 0 || z[n].hi() < 0 || off_half(sec, z[sec.half])) break;
      if (strictly_pre(sec, before.hull()[n]) && in_half(sec, z[sec.half]) && transversal(sec, field.eval(z)[n])) {
        crossing = true;
        break;
      }
      if (retry >= 8) throw Inconclusive(FailCode::lost_transversality, "cannot separate a section crossing");
      s = before;
      v = vbefore;
      h_req = 0.5 * r.h;
    }
    if (!crossing) {
      t += Interval(r.h);
      continue;
    }

    // crossing window [0, H] measured from `before`
    Box zall = r.apriori;
    double big_h = r.h;
    while (!strictly_post(sec, s.hull()[n])) {
      if (++steps > kMaxSteps) throw Inconclusive(FailCode::step_underflow, "too many steps");
      const StepResult r2 = one_step(field, s, policy);
      trust_check(sec, r2.apriori);
      if (!in_half(sec, r2.apriori[sec.half]) || !transversal(sec, field.eval(r2.apriori)[n]))
        throw Inconclusive(FailCode::lost_transversality, "lost transversality inside the crossing window");
      zall = hull(zall, r2.apriori);
      big_h += r2.h;
    }

    const double tau = crossing_time_estimate(sec, field, before.xhat, big_h);
    v = vbefore;
    const LohnerSet y = flow_to(field, before, tau, policy, vp);
    const Box yh = y.hull();
    Box zc = zall;
    Interval delta = -yh[n] / field.eval(zc)[n];
    for (int k = 0; k < 3; ++k) {
      const auto seg = intersect(yh + conv0(delta) * field.eval(zc), zall);
      if (!seg) throw Inconclusive(FailCode::lost_transversality, "crossing localisation failed");
      zc = *seg;
      delta = -yh[n] / field.eval(zc)[n];
    }

    const Box fz = field.eval(zc);
    const auto idx = section_coords(sec, d);
    IMatrix l(d - 1, d);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      l(k, idx[k]) = Interval(1.0);
      l(k, n) = -(fz[idx[k]] / fz[n]);
    }

    ReturnResult res;
    res.image.offset = l * Box(y.xhat) + (l * y.B) * y.e;
    res.image.lin = l * y.C;
    res.image.coeffs = y.r;
    res.time = t + inflate(Interval(tau), 1.0, 1e-13 * (1 + tau)) + delta;
    res.crossing_box = zc;
    if (!(res.time.lo() > 0)) throw Inconclusive(FailCode::lost_transversality, "return time not positive");
    if (with_derivative) {
      const auto w = variational_apriori(field, zc, conv0(delta), policy);
      if (!w) throw Inconclusive(FailCode::singular, "no variational enclosure at the crossing");
      res.derivative = l * (*w * (v->hull() * emb));
    }
    return res;
  }
}

ReturnResult poincare_image(const SectionDef& sec, const PolyField& field, const Box& x, const StepPolicy& policy) {
  const std::size_t k = x.size();
  return poincare_image(sec, field, Box(x.mid()), IMatrix::identity(k), x - Box(x.mid()), policy);
}

IMatrix poincare_derivative(const SectionDef& sec, const PolyField& field, const Box& x, const StepPolicy& policy) {
  const std::size_t k = x.size();
  return *poincare_image(sec, field, Box(x.mid()), IMatrix::identity(k), x - Box(x.mid()), policy, true).derivative;
}

AffineMapEval poincare_evaluator(const SectionDef& sec, const PolyField& field, const StepPolicy& policy) {
  return [sec, &field, policy](const Box& c, const IMatrix& m, const Box& u) { return poincare_image(sec, field, c, m, u, policy).image; };
}

std::optional<PVector> return_map_double(const SectionDef& sec, const PolyField& field, const PVector& s, double* time, double t_max) {
  const std::size_t d = field.dim();
  const auto n = static_cast<Eigen::Index>(sec.normal);
  const auto hf = static_cast<Eigen::Index>(sec.half);
  PVector x(static_cast<Eigen::Index>(d));
  {
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = i == n ? 0.0 : s[k++];
  }
  StepPolicy pol;
  pol.h_max = 0.1;
  const int order = pol.order;
  TaylorEngine<double> eng(field);
  double t = 0.0;
  bool left = false;
  std::vector<double> v(x.data(), x.data() + x.size());
  auto eval_poly = [&](double hs, std::size_t i) {
    double acc = 0.0;
    for (int j = order; j >= 0; --j) acc = acc * hs + eng.coeff(j, i);
    return acc;
  };
  while (t < t_max) {
    const PVector cur = PVector::Map(v.data(), static_cast<Eigen::Index>(d));
    const double h = propose_step(field, cur, pol);
    eng.run(v, order, false);
    std::vector<double> nv(d);
    for (std::size_t i = 0; i < d; ++i) nv[i] = eval_poly(h, i);
    const double g0 = v[static_cast<std::size_t>(n)] * sec.direction, g1 = nv[static_cast<std::size_t>(n)] * sec.direction;
    if (!left) {
      if (g1 <= 0) return std::nullopt;
      left = true;
    } else if (g0 < 0 && g1 >= 0 && nv[static_cast<std::size_t>(hf)] * sec.half_sign > 0) {
      // root of the normal component of the Taylor polynomial
      double a = 0.0, b = h, sc = h * g0 / (g0 - g1);
      for (int it = 0; it < 60; ++it) {
        const double g = eval_poly(sc, static_cast<std::size_t>(n)) * sec.direction;
        if (g < 0) a = sc; else b = sc;
        double dg = 0.0;
        for (int j = order; j >= 1; --j) dg = dg * sc + j * eng.coeff(j, static_cast<std::size_t>(n));
        dg *= sec.direction;
        double next = dg > 0 ? sc - g / dg : 0.5 * (a + b);
        if (!(next >= a && next <= b)) next = 0.5 * (a + b);
        if (std::fabs(next - sc) <= 1e-17 * (1 + h)) {
          sc = next;
          break;
        }
        sc = next;
      }
      PVector out(static_cast<Eigen::Index>(d - 1));
      Eigen::Index k = 0;
      for (std::size_t i = 0; i < d; ++i)
        if (static_cast<Eigen::Index>(i) != n) out[k++] = eval_poly(sc, i);
      if (time) *time = t + sc;
      return out;
    }
    for (double c : nv)
      if (!std::isfinite(c) || std::fabs(c) > 1e6) return std::nullopt;
    v = nv;
    t += h;
  }
  return std::nullopt;
}

std::vector<PVector> refine_orbit_double(const SectionDef& sec, const PolyField& field, std::vector<PVector> u, double tol, int max_iter,
                                         double* residual) {
  const std::size_t n = u.size();
  if (n == 0) throw std::invalid_argument("refine_orbit_double: no guesses");
  const Eigen::Index k = u[0].size();
  const Eigen::Index total = static_cast<Eigen::Index>(n) * k;
  auto residual_of = [&](const std::vector<PVector>& pts, PVector* out) -> bool {
    PVector g(total);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = return_map_double(sec, field, pts[i]);
      if (!p) return false;
      g.segment(static_cast<Eigen::Index>(i) * k, k) = *p - pts[(i + 1) % n];
    }
    *out = g;
    return true;
  };
  PVector g;
  if (!residual_of(u, &g)) throw Inconclusive(FailCode::newton_failed, "return map undefined at a guess");
  for (int it = 0; it < max_iter && g.lpNorm<Eigen::Infinity>() > tol; ++it) {
    PMatrix jac = PMatrix::Zero(total, total);
    for (std::size_t i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < k; ++c) {
        const double step = 1e-7 * (std::fabs(u[i][c]) + 1e-2);
        PVector up = u[i], dn = u[i];
        up[c] += step;
        dn[c] -= step;
        const auto pu = return_map_double(sec, field, up), pd = return_map_double(sec, field, dn);
        if (!pu || !pd) throw Inconclusive(FailCode::newton_failed, "return map undefined near a guess");
        jac.block(static_cast<Eigen::Index>(i) * k, static_cast<Eigen::Index>(i) * k + c, k, 1) = (*pu - *pd) / (2 * step);
      }
      const std::size_t nx = (i + 1) % n;
      for (Eigen::Index c = 0; c < k; ++c) jac(static_cast<Eigen::Index>(i) * k + c, static_cast<Eigen::Index>(nx) * k + c) -= 1.0;
    }
    const PVector delta = jac.fullPivLu().solve(-g);
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
      std::vector<PVector> trial = u;
      for (std::size_t i = 0; i < n; ++i) trial[i] += lambda * delta.segment(static_cast<Eigen::Index>(i) * k, k);
      PVector gt;
      if (residual_of(trial, &gt) && gt.lpNorm<Eigen::Infinity>() < g.lpNorm<Eigen::Infinity>()) {
        u = trial;
        g = gt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (residual) *residual = g.lpNorm<Eigen::Infinity>();
  return u;
}

OrbitEnclosure interval_newton_orbit(const SectionDef& sec, const PolyField& field, int n, const std::vector<PVector>& guesses,
                                     const NewtonPolicy& np, const StepPolicy& policy) {
  if (n < 1 || static_cast<int>(guesses.size()) != n) throw std::invalid_argument("interval_newton_orbit: need n guesses");
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t k = static_cast<std::size_t>(guesses[0].size());
  const std::size_t total = nn * k;
  auto unflat = [&](const Box& x) {
    std::vector<Box> b(nn, Box(k));
    for (std::size_t i = 0; i < nn; ++i)
      for (std::size_t c = 0; c < k; ++c) b[i][c] = x[i * k + c];
    return b;
  };

  Box xb(total);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t c = 0; c < k; ++c) {
      const double g = guesses[i][static_cast<Eigen::Index>(c)];
      const double r = np.radius * (1 + std::fabs(g));
      xb[i * k + c] = Interval(g - r, g + r);
    }

  // N(X) = uhat - DG(X)^{-1} G(uhat)
  auto newton = [&](const Box& x) -> Box {
    const PVector uh = x.mid();
    const std::vector<Box> xs = unflat(x);
    Box g(total);
    IMatrix a(total, total);
    for (std::size_t i = 0; i < nn; ++i) {
      Box pt(k);
      for (std::size_t c = 0; c < k; ++c) pt[c] = Interval(uh[static_cast<Eigen::Index>(i * k + c)]);
      const Box p = poincare_image(sec, field, pt, policy).hull();
      const std::size_t nx = (i + 1) % nn;
      for (std::size_t c = 0; c < k; ++c) g[i * k + c] = p[c] - Interval(uh[static_cast<Eigen::Index>(nx * k + c)]);
      const IMatrix dp = poincare_derivative(sec, field, xs[i], policy);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) a(i * k + r, i * k + c) += dp(r, c);
        a(i * k + r, nx * k + r) -= Interval(1.0);
      }
    }
    Box neg(total);
    for (std::size_t i = 0; i < total; ++i) neg[i] = -g[i];
    Box delta;
    try {
      delta = imat_solve_preconditioned(a, neg);
    } catch (const SingularEnclosure&) {
      throw Inconclusive(FailCode::singular, "shooting derivative not invertibly enclosed");
    }
    return Box(uh) + delta;
  };

  OrbitEnclosure out;
  out.n = n;
  try {
    for (int attempt = 0; attempt < np.attempts; ++attempt) {
      ++out.iterations;
      const Box nx = newton(xb);
      out.last_newton = unflat(nx);
      if (!nx.is_finite()) break;
      if (subset_interior(nx, xb)) {
        out.unique = true;
        xb = *intersect(nx, xb);
        for (int sh = 0; sh < np.sharpen; ++sh) {
          ++out.iterations;
          const Box n2 = newton(xb);
          const auto cut = intersect(n2, xb);
          if (!cut) throw Inconclusive(FailCode::newton_failed, "sharpening produced an empty set");
          const bool progress = cut->max_width() < 0.99 * xb.max_width();
          xb = *cut;
          if (!progress) break;
        }
        out.boxes = unflat(xb);
        return out;
      }
      xb = inflate(hull(nx, Box(xb.mid())), 1.2, 1e-15);
    }
  } catch (const Inconclusive& e) {
    if (e.code() == FailCode::newton_failed) throw;
    throw Inconclusive(FailCode::newton_failed, std::string("interval Newton aborted: ") + e.what());
  }
  throw Inconclusive(FailCode::newton_failed, "interval Newton test N(X) ⊂ int X failed");
}

ScalarNewtonResult interval_newton_scalar(const std::function<Interval(const Interval&)>& f, const std::function<Interval(const Interval&)>& df,
                                          Interval x, double tol, int max_iter) {
  ScalarNewtonResult r;
  for (int it = 0; it < max_iter; ++it) {
    ++r.iterations;
    const double m = x.mid();
    const Interval d = df(x);
    if (d.contains(0.0)) throw Inconclusive(FailCode::singular, "derivative enclosure contains zero");
    const Interval nx = Interval(m) - f(Interval(m)) / d;
    if (subset_interior(nx, x)) r.unique = true;
    const auto cut = intersect(nx, x);
    if (!cut) throw Inconclusive(FailCode::newton_failed, "no zero in the box");
    const bool progress = cut->width() < x.width();
    x = *cut;
    if (x.width() <= tol || !progress) break;
  }
  r.x = x;
  return r;
}

}  // namespace cgrid
