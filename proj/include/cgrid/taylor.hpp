#pragma once

#include <vector>

#include "cgrid/linalg.hpp"
#include "cgrid/poly_field.hpp"

namespace cgrid {

namespace detail {

template <class T>
struct TaylorScalar;

template <>
struct TaylorScalar<Interval> {
  static Interval coef(const PolyField::Term& t) { return t.coef; }
  static Interval reciprocal(int j) { return Interval(1.0) / Interval(static_cast<double>(j)); }
};

template <>
struct TaylorScalar<double> {
  static double coef(const PolyField::Term& t) { return t.coef_mid; }
  static double reciprocal(int j) { return 1.0 / j; }
};

template <>
struct TaylorScalar<long double> {
  static long double coef(const PolyField::Term& t) { return t.coef_ld; }
  static long double reciprocal(int j) { return 1.0L / j; }
};

}  // namespace detail

/// Taylor coefficients of the solution x(t) = sum_j c_j t^j of x' = f(x),
/// x(0) = x0, by the automatic recurrence c_{j+1} = [f(x(t))]_j / (j+1), and
/// optionally their derivatives with respect to x0 (the coefficients of the
/// first variational equation).
///
/// T = Interval gives rigorous enclosures valid for every point of the input
/// box; T = double gives the plain floating-point series.
template <class T>
class TaylorEngine {
 public:
  explicit TaylorEngine(const PolyField& field) : f_(field), d_(field.dim()) {}

  void run(const std::vector<T>& x0, int order, bool with_grad) {
    order_ = order;
    grad_ = with_grad;
    const std::size_t k1 = static_cast<std::size_t>(order) + 1;
    const std::size_t nn = f_.nodes().size();
    s_.assign(nn * k1, T(0.0));
    if (with_grad) g_.assign(nn * k1 * d_, T(0.0));
    if (static_cast<int>(recip_.size()) < order + 1) {
      recip_.clear();
      recip_.push_back(T(1.0));
      for (int j = 1; j <= order; ++j) recip_.push_back(detail::TaylorScalar<T>::reciprocal(j));
    }
    for (std::size_t i = 0; i < d_; ++i) {
      s_[i * k1] = x0[i];
      if (with_grad) g_[(i * k1) * d_ + i] = T(1.0);
    }
    std::vector<T> acc(d_), gacc(d_ * d_);
    for (int j = 0; j < order; ++j) {
      const std::size_t jj = static_cast<std::size_t>(j);
      for (std::size_t n = d_; n < nn; ++n) {
        const auto& nd = f_.nodes()[n];
        const std::size_t a = static_cast<std::size_t>(nd.a), b = static_cast<std::size_t>(nd.b);
        T v(0.0);
        for (std::size_t i = 0; i <= jj; ++i) v += s_[a * k1 + i] * s_[b * k1 + jj - i];
        s_[n * k1 + jj] = v;
        if (with_grad) {
          for (std::size_t m = 0; m < d_; ++m) {
            T gv(0.0);
            for (std::size_t i = 0; i <= jj; ++i) {
              gv += g_[(a * k1 + i) * d_ + m] * s_[b * k1 + jj - i];
              gv += s_[a * k1 + i] * g_[(b * k1 + jj - i) * d_ + m];
            }
            g_[(n * k1 + jj) * d_ + m] = gv;
          }
        }
      }
      for (std::size_t c = 0; c < d_; ++c) {
        T v(0.0);
        for (std::size_t m = 0; m < d_; ++m) gacc[c * d_ + m] = T(0.0);
        for (const auto& t : f_.terms()[c]) {
          const T cf = detail::TaylorScalar<T>::coef(t);
          if (t.node < 0) {
            if (j == 0) v += cf;
            continue;
          }
          const std::size_t n = static_cast<std::size_t>(t.node);
          v += cf * s_[n * k1 + jj];
          if (with_grad)
            for (std::size_t m = 0; m < d_; ++m) gacc[c * d_ + m] += cf * g_[(n * k1 + jj) * d_ + m];
        }
        acc[c] = v;
      }
      const T r = recip_[jj + 1];
      for (std::size_t c = 0; c < d_; ++c) {
        s_[c * k1 + jj + 1] = acc[c] * r;
        if (with_grad)
          for (std::size_t m = 0; m < d_; ++m) g_[(c * k1 + jj + 1) * d_ + m] = gacc[c * d_ + m] * r;
      }
    }
  }

  int order() const { return order_; }
  std::size_t dim() const { return d_; }
  /// j-th coefficient of coordinate i.
  const T& coeff(int j, std::size_t i) const { return s_[i * (static_cast<std::size_t>(order_) + 1) + static_cast<std::size_t>(j)]; }
  /// d c_j[i] / d x0[m].
  const T& grad(int j, std::size_t i, std::size_t m) const {
    return g_[(i * (static_cast<std::size_t>(order_) + 1) + static_cast<std::size_t>(j)) * d_ + m];
  }

 private:
  const PolyField& f_;
  std::size_t d_;
  int order_ = 0;
  bool grad_ = false;
  std::vector<T> s_, g_, recip_;
};

/// Enclosures of the solution Taylor coefficients c_0..c_order at every
/// point of x.
std::vector<Box> taylor_coeffs(const PolyField& field, const Box& x, int order);

}  // namespace cgrid
