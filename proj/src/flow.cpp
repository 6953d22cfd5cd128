#include "cgrid/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgrid/taylor.hpp"

namespace cgrid {

const char* to_string(FailCode c) {
  switch (c) {
    case FailCode::step_underflow: return "step_underflow";
    case FailCode::lost_transversality: return "lost_transversality";
    case FailCode::left_trust_region: return "left_trust_region";
    case FailCode::singular: return "singular";
    case FailCode::newton_failed: return "newton_failed";
    case FailCode::subdivision_cap: return "subdivision_cap";
  }
  return "unknown";
}

namespace {

Box point_box(const PVector& x) { return Box(x); }

// Orthonormal frame from QR of m with columns taken in decreasing order of
// norm * weight.
PMatrix qr_frame(const PMatrix& m, const Box& weight) {
  const Eigen::Index d = m.cols();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> key(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) key[static_cast<std::size_t>(j)] = m.col(j).norm() * weight[static_cast<std::size_t>(j)].rad();
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)]; });
  PMatrix p(m.rows(), d);
  for (Eigen::Index j = 0; j < d; ++j) p.col(j) = m.col(idx[static_cast<std::size_t>(j)]);
  Eigen::HouseholderQR<PMatrix> qr(p);
  PMatrix q = qr.householderQ();
  if (!q.allFinite()) return PMatrix::Identity(m.rows(), d);
  return q;
}

IMatrix sub_point(const IMatrix& a, const PMatrix& p) { return a - IMatrix(p); }

}  // namespace

LohnerSet LohnerSet::from_box(const Box& x) {
  LohnerSet s;
  const std::size_t d = x.size();
  s.xhat = x.mid();
  s.C = PMatrix(static_cast<Eigen::Index>(d), 0);
  s.B = PMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  s.e = x - point_box(s.xhat);
  return s;
}

LohnerSet LohnerSet::from_affine(const Box& c, const IMatrix& m, const Box& u_box) {
  if (m.rows() != c.size() || m.cols() != u_box.size()) throw std::invalid_argument("LohnerSet::from_affine: shape mismatch");
  LohnerSet s;
  const std::size_t d = c.size();
  const PVector um = u_box.mid();
  s.r = u_box - point_box(um);
  s.C = m.mid();
  // c + M um + (M - mid M) r collects everything that is not exactly C r
  Box x0 = c + m * point_box(um) + sub_point(m, s.C) * s.r;
  s.xhat = x0.mid();
  s.B = PMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  s.e = x0 - point_box(s.xhat);
  return s;
}

Box LohnerSet::hull() const {
  Box h = point_box(xhat) + IMatrix(B) * e;
  if (r.size() > 0) h += IMatrix(C) * r;
  return h;
}

VariationalSet VariationalSet::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return {PMatrix::Identity(n, n), PMatrix::Identity(n, n), IMatrix(d, d)};
}

IMatrix VariationalSet::hull() const { return IMatrix(vhat) + IMatrix(q) * err; }

std::optional<Box> a_priori_enclosure(const PolyField& field, const Box& x, double h, const StepPolicy& policy) {
  if (!(h > 0)) throw std::invalid_argument("a_priori_enclosure: h must be positive");
  const Interval dt(0.0, h);
  Box z = x + dt * field.eval(x);
  z = inflate(z, policy.inflation, 1e-15 * (1.0 + z.max_width()));
  for (int it = 0; it < policy.picard_attempts; ++it) {
    const Box z1 = x + dt * field.eval(z);
    if (!z1.is_finite()) return std::nullopt;
    if (subset(z1, z)) return z1;
    z = inflate(hull(z, z1), policy.inflation, 1e-15);
  }
  return std::nullopt;
}

std::optional<IMatrix> variational_apriori(const PolyField& field, const Box& z, const Interval& dt, const StepPolicy& policy) {
  const std::size_t d = field.dim();
  const IMatrix id = IMatrix::identity(d);
  const IMatrix a = dt * field.jacobian(z);
  IMatrix w = id + a;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) w(i, j) = inflate(w(i, j), policy.inflation, 1e-15);
  for (int it = 0; it < policy.picard_attempts; ++it) {
    const IMatrix w1 = id + a * w;
    if (!w1.is_finite()) return std::nullopt;
    if (subset(w1, w)) return w1;
    w = hull(w, w1);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) w(i, j) = inflate(w(i, j), policy.inflation, 1e-15);
  }
  return std::nullopt;
}

double propose_step(const PolyField& field, const PVector& x, const StepPolicy& policy) {
  if (policy.fixed_step > 0) return policy.fixed_step;
  TaylorEngine<double> eng(field);
  std::vector<double> v(x.data(), x.data() + x.size());
  const int k = policy.order;
  eng.run(v, k, false);
  auto norm = [&](int j) {
    double m = 0;
    for (std::size_t i = 0; i < field.dim(); ++i) m = std::fmax(m, std::fabs(eng.coeff(j, i)));
    return m;
  };
  double h = policy.h_max;
  const double nk = norm(k), nk1 = norm(k - 1);
  if (nk > 0) h = std::fmin(h, std::pow(policy.tolerance / nk, 1.0 / k));
  if (k > 1 && nk1 > 0) h = std::fmin(h, std::pow(policy.tolerance / nk1, 1.0 / (k - 1)));
  if (!std::isfinite(h)) h = policy.h_min;
  return std::fmax(h, policy.h_min);
}

StepResult one_step(const PolyField& field, LohnerSet& s, const StepPolicy& policy, VariationalSet* v, double h_request) {
  const std::size_t d = s.dim();
  const int k = policy.order;
  const Box x = s.hull();
  if (!x.is_finite()) throw Inconclusive(FailCode::step_underflow, "set enclosure is not finite");

  double h = propose_step(field, s.xhat, policy);
  if (h_request > 0) h = std::fmin(h, h_request);
  std::optional<Box> z;
  std::optional<IMatrix> w;
  for (;;) {
    z = a_priori_enclosure(field, x, h, policy);
    if (z && v) w = variational_apriori(field, *z, Interval(0.0, h), policy);
    if (z && (!v || w)) break;
    h *= 0.5;
    if (h < policy.h_min) throw Inconclusive(FailCode::step_underflow, "step size fell below h_min");
  }

  const Interval hi(h);
  TaylorEngine<Interval> ep(field), ex(field), ez(field);
  ep.run(point_box(s.xhat).coords(), k, false);
  ex.run(x.coords(), k, true);
  ez.run(z->coords(), k + 1, v != nullptr);

  // Horner in h for the polynomial part and its derivative
  Box t(d);
  IMatrix jt(d, d);
  for (int j = k; j >= 0; --j) {
    for (std::size_t i = 0; i < d; ++i) {
      t[i] = t[i] * hi + ep.coeff(j, i);
      for (std::size_t m = 0; m < d; ++m) jt(i, m) = jt(i, m) * hi + ex.grad(j, i, m);
    }
  }
  const Interval hk = pow(hi, k + 1);
  Box y = t;
  for (std::size_t i = 0; i < d; ++i) y[i] += ez.coeff(k + 1, i) * hk;

  const PVector xn = y.mid();
  const Box yr = y - point_box(xn);
  const IMatrix dm = jt * s.B;
  const PMatrix bn = qr_frame(dm.mid(), s.e);
  const IMatrix bni(bn);
  Box rest = yr;
  PMatrix cn = s.C;
  if (s.r.size() > 0) {
    const IMatrix a = jt * s.C;
    cn = a.mid();
    rest += sub_point(a, cn) * s.r;
  }
  Box en;
  try {
    en = imat_solve(bni, dm) * s.e + imat_solve(bni, rest);
  } catch (const SingularEnclosure&) {
    throw Inconclusive(FailCode::singular, "Lohner frame not invertibly enclosed");
  }

  if (v) {
    IMatrix dr(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t m = 0; m < d; ++m) dr(i, m) = ez.grad(k + 1, i, m);
    const IMatrix dphi = jt + hk * (dr * *w);
    const IMatrix p1 = dphi * v->vhat;
    const IMatrix p2 = dphi * v->q;
    const PMatrix vh = p1.mid();
    const PMatrix qn = qr_frame(p2.mid(), Box(std::vector<Interval>(d, Interval(-1.0, 1.0))));
    const IMatrix qni(qn);
    try {
      v->err = imat_solve(qni, p2) * v->err + imat_solve(qni, sub_point(p1, vh));
    } catch (const SingularEnclosure&) {
      throw Inconclusive(FailCode::singular, "variational frame not invertibly enclosed");
    }
    v->vhat = vh;
    v->q = qn;
  }

  s.xhat = xn;
  s.C = cn;
  s.B = bn;
  s.e = en;
  StepResult res;
  res.h = h;
  res.enclosure = s.hull();
  res.apriori = *z;
  return res;
}

LohnerSet flow_to(const PolyField& field, LohnerSet s, double t, const StepPolicy& policy, VariationalSet* v) {
  if (t < 0) throw std::invalid_argument("flow_to: negative time");
  double done = 0.0;
  while (done < t) {
    const double rem = t - done;
    const StepResult r = one_step(field, s, policy, v, rem);
    done = r.h >= rem ? t : done + r.h;
  }
  return s;
}

std::pair<LohnerSet, IMatrix> flow_with_variational(const PolyField& field, const LohnerSet& s, double t, const StepPolicy& policy) {
  VariationalSet v = VariationalSet::identity(s.dim());
  LohnerSet out = flow_to(field, s, t, policy, &v);
  return {out, v.hull()};
}

PVector flow_double(const PolyField& field, const PVector& x, double t, int order, double h_max) {
  TaylorEngine<double> eng(field);
  std::vector<double> v(x.data(), x.data() + x.size());
  StepPolicy pol;
  pol.order = order;
  pol.h_max = h_max;
  pol.h_min = 1e-12;
  double done = 0.0;
  const double dir = t < 0 ? -1.0 : 1.0;
  const double total = std::fabs(t);
  while (done < total) {
    PVector cur = PVector::Map(v.data(), static_cast<Eigen::Index>(v.size()));
    double h = std::fmin(propose_step(field, cur, pol), total - done);
    eng.run(v, order, false);
    const double hs = dir * h;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double acc = 0.0;
      for (int j = order; j >= 0; --j) acc = acc * hs + eng.coeff(j, i);
      v[i] = acc;
    }
    done = h >= total - done ? total : done + h;
  }
  return PVector::Map(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace cgrid
