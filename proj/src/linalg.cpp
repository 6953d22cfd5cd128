#include "cgrid/linalg.hpp"

#include <algorithm>
#include <ostream>

namespace cgrid {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("dimension mismatch in ") + what);
}

// Dot product of an interval row with an interval vector, accumulated left to right.
Interval dot(const Interval* a, std::size_t stride, const Interval* b, std::size_t n) {
  Interval s(0.0);
  for (std::size_t k = 0; k < n; ++k) s += a[k * stride] * b[k];
  return s;
}

}  // namespace

Box::Box(const PVector& p) : c_(static_cast<std::size_t>(p.size())) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = Interval(p[static_cast<Eigen::Index>(i)]);
}

PVector Box::mid() const {
  PVector m(static_cast<Eigen::Index>(c_.size()));
  for (std::size_t i = 0; i < c_.size(); ++i) m[static_cast<Eigen::Index>(i)] = c_[i].mid();
  return m;
}

double Box::max_width() const {
  double w = 0.0;
  for (const auto& x : c_) w = std::fmax(w, x.width());
  return w;
}

bool Box::is_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](const Interval& x) { return x.is_finite(); });
}

bool Box::contains(const PVector& p) const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].contains(p[static_cast<Eigen::Index>(i)])) return false;
  return true;
}

Box& Box::operator+=(const Box& o) {
  require_same(size(), o.size(), "Box +");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Box& Box::operator-=(const Box& o) {
  require_same(size(), o.size(), "Box -");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Box operator+(const Box& a, const Box& b) { Box r = a; r += b; return r; }
Box operator-(const Box& a, const Box& b) { Box r = a; r -= b; return r; }

Box operator*(const Interval& s, const Box& a) {
  Box r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Box hull(const Box& a, const Box& b) {
  require_same(a.size(), b.size(), "hull");
  Box r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = hull(a[i], b[i]);
  return r;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  require_same(a.size(), b.size(), "intersect");
  Box r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = intersect(a[i], b[i]);
    if (!x) return std::nullopt;
    r[i] = *x;
  }
  return r;
}

bool subset(const Box& a, const Box& b) {
  require_same(a.size(), b.size(), "subset");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!subset(a[i], b[i])) return false;
  return true;
}

bool subset_interior(const Box& a, const Box& b) {
  require_same(a.size(), b.size(), "subset_interior");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!subset_interior(a[i], b[i])) return false;
  return true;
}

std::pair<Box, Box> split(const Box& a, std::size_t k) {
  auto [l, r] = split(a[k]);
  Box left = a, right = a;
  left[k] = l;
  right[k] = r;
  return {left, right};
}

Box inflate(const Box& a, double factor, double abs_slack) {
  Box r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = inflate(a[i], factor, abs_slack);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Box& b) {
  os << '(';
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i];
  return os << ')';
}

IMatrix::IMatrix(const PMatrix& p)
    : r_(static_cast<std::size_t>(p.rows())), c_(static_cast<std::size_t>(p.cols())), a_(r_ * c_) {
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) (*this)(i, j) = Interval(p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
}

IMatrix IMatrix::identity(std::size_t n) {
  IMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Interval(1.0);
  return m;
}

IMatrix IMatrix::from_rows(std::size_t rows, std::size_t cols, std::initializer_list<Interval> v) {
  if (v.size() != rows * cols) throw std::invalid_argument("IMatrix::from_rows: wrong entry count");
  IMatrix m(rows, cols);
  std::copy(v.begin(), v.end(), m.a_.begin());
  return m;
}

Box IMatrix::column(std::size_t j) const {
  Box b(r_);
  for (std::size_t i = 0; i < r_; ++i) b[i] = (*this)(i, j);
  return b;
}

void IMatrix::set_column(std::size_t j, const Box& v) {
  for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

PMatrix IMatrix::mid() const {
  PMatrix m(static_cast<Eigen::Index>(r_), static_cast<Eigen::Index>(c_));
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).mid();
  return m;
}

double IMatrix::max_width() const {
  double w = 0.0;
  for (const auto& x : a_) w = std::fmax(w, x.width());
  return w;
}

bool IMatrix::is_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](const Interval& x) { return x.is_finite(); });
}

IMatrix operator*(const IMatrix& a, const IMatrix& b) {
  require_same(a.cols(), b.rows(), "IMatrix *");
  IMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Interval s(0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

IMatrix operator+(const IMatrix& a, const IMatrix& b) {
  require_same(a.rows(), b.rows(), "IMatrix +");
  require_same(a.cols(), b.cols(), "IMatrix +");
  IMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

IMatrix operator-(const IMatrix& a, const IMatrix& b) {
  require_same(a.rows(), b.rows(), "IMatrix -");
  require_same(a.cols(), b.cols(), "IMatrix -");
  IMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

IMatrix operator*(const Interval& s, const IMatrix& a) {
  IMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

Box operator*(const IMatrix& a, const Box& x) {
  require_same(a.cols(), x.size(), "IMatrix * Box");
  Box r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) r[i] = dot(&a(i, 0), 1, &x[0], a.cols());
  return r;
}

IMatrix operator*(const PMatrix& a, const IMatrix& b) { return IMatrix(a) * b; }
IMatrix operator*(const IMatrix& a, const PMatrix& b) { return a * IMatrix(b); }
Box operator*(const PMatrix& a, const Box& x) { return IMatrix(a) * x; }

IMatrix hull(const IMatrix& a, const IMatrix& b) {
  IMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = hull(a(i, j), b(i, j));
  return r;
}

bool subset(const IMatrix& a, const IMatrix& b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!subset(a(i, j), b(i, j))) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const IMatrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
  }
  return os << ']';
}

IMatrix imat_solve(const IMatrix& a, const IMatrix& b) {
  const std::size_t n = a.rows();
  require_same(n, a.cols(), "imat_solve (square)");
  require_same(n, b.rows(), "imat_solve (rhs)");
  const std::size_t m = b.cols();
  IMatrix u = a;
  IMatrix x = b;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = u(perm[k], k).mig();
    for (std::size_t i = k + 1; i < n; ++i) {
      const double g = u(perm[i], k).mig();
      if (g > best) { best = g; p = i; }
    }
    if (!(best > 0.0)) throw SingularEnclosure();
    std::swap(perm[k], perm[p]);
    const std::size_t pk = perm[k];
    const Interval piv = u(pk, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const std::size_t pi = perm[i];
      const Interval l = u(pi, k) / piv;
      u(pi, k) = Interval(0.0);
      for (std::size_t j = k + 1; j < n; ++j) u(pi, j) -= l * u(pk, j);
      for (std::size_t j = 0; j < m; ++j) x(pi, j) -= l * x(pk, j);
    }
  }

  IMatrix sol(n, m);
  for (std::size_t jj = 0; jj < m; ++jj) {
    for (std::size_t kk = n; kk-- > 0;) {
      const std::size_t pk = perm[kk];
      Interval s = x(pk, jj);
      for (std::size_t j = kk + 1; j < n; ++j) s -= u(pk, j) * sol(j, jj);
      sol(kk, jj) = s / u(pk, kk);
    }
  }
  if (!sol.is_finite()) throw SingularEnclosure();
  return sol;
}

Box imat_solve(const IMatrix& a, const Box& b) {
  IMatrix rhs(b.size(), 1);
  rhs.set_column(0, b);
  return imat_solve(a, rhs).column(0);
}

Box imat_solve_preconditioned(const IMatrix& a, const Box& b) {
  const PMatrix am = a.mid();
  Eigen::FullPivLU<PMatrix> lu(am);
  if (!lu.isInvertible()) throw SingularEnclosure();
  const PMatrix y = lu.inverse();
  return imat_solve(y * a, y * b);
}

}  // namespace cgrid
