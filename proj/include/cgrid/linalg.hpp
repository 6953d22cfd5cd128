#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cgrid/interval.hpp"

namespace cgrid {

using PVector = Eigen::VectorXd;
using PMatrix = Eigen::MatrixXd;

/// Raised by imat_solve when Gaussian elimination meets a pivot interval that
/// contains zero. Callers treat this as an inconclusive result.
class SingularEnclosure : public std::runtime_error {
 public:
  SingularEnclosure() : std::runtime_error("matrix not invertibly enclosed") {}
};

/// Interval vector (axis-aligned box).
class Box {
 public:
  Box() = default;
  explicit Box(std::size_t n, Interval v = Interval(0.0)) : c_(n, v) {}
  Box(std::initializer_list<Interval> v) : c_(v) {}
  explicit Box(std::vector<Interval> v) : c_(std::move(v)) {}
  explicit Box(const PVector& p);

  std::size_t size() const { return c_.size(); }
  Interval& operator[](std::size_t i) { return c_[i]; }
  const Interval& operator[](std::size_t i) const { return c_[i]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  const std::vector<Interval>& coords() const { return c_; }

  PVector mid() const;
  double max_width() const;
  bool is_finite() const;
  bool contains(const PVector& p) const;

  Box& operator+=(const Box& o);
  Box& operator-=(const Box& o);

  friend bool operator==(const Box& a, const Box& b) { return a.c_ == b.c_; }

 private:
  std::vector<Interval> c_;
};

Box operator+(const Box& a, const Box& b);
Box operator-(const Box& a, const Box& b);
Box operator*(const Interval& s, const Box& a);
Box hull(const Box& a, const Box& b);
std::optional<Box> intersect(const Box& a, const Box& b);
bool subset(const Box& a, const Box& b);
bool subset_interior(const Box& a, const Box& b);
/// Bisect coordinate k at its midpoint.
std::pair<Box, Box> split(const Box& a, std::size_t k);
Box inflate(const Box& a, double factor, double abs_slack);
std::ostream& operator<<(std::ostream& os, const Box& b);

/// Row-major interval matrix.
class IMatrix {
 public:
  IMatrix() = default;
  IMatrix(std::size_t rows, std::size_t cols, Interval v = Interval(0.0)) : r_(rows), c_(cols), a_(rows * cols, v) {}
  explicit IMatrix(const PMatrix& p);
  static IMatrix identity(std::size_t n);
  /// Build from a row-major list of entries.
  static IMatrix from_rows(std::size_t rows, std::size_t cols, std::initializer_list<Interval> v);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Interval& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Interval& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  Box column(std::size_t j) const;
  void set_column(std::size_t j, const Box& v);
  PMatrix mid() const;
  double max_width() const;
  bool is_finite() const;

  friend bool operator==(const IMatrix& a, const IMatrix& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Interval> a_;
};

IMatrix operator*(const IMatrix& a, const IMatrix& b);
IMatrix operator+(const IMatrix& a, const IMatrix& b);
IMatrix operator-(const IMatrix& a, const IMatrix& b);
IMatrix operator*(const Interval& s, const IMatrix& a);
Box operator*(const IMatrix& a, const Box& x);
IMatrix operator*(const PMatrix& a, const IMatrix& b);
IMatrix operator*(const IMatrix& a, const PMatrix& b);
Box operator*(const PMatrix& a, const Box& x);
IMatrix hull(const IMatrix& a, const IMatrix& b);
bool subset(const IMatrix& a, const IMatrix& b);
std::ostream& operator<<(std::ostream& os, const IMatrix& m);

/// Enclosure of { x : A0 x = b0, A0 ∈ A, b0 ∈ b } by interval Gaussian
/// elimination with mignitude pivoting.
/// @throws SingularEnclosure if a pivot interval contains zero.
Box imat_solve(const IMatrix& a, const Box& b);
/// Column-wise solve; the result encloses A^{-1} B for every A ∈ a, B ∈ b.
IMatrix imat_solve(const IMatrix& a, const IMatrix& b);

/// imat_solve after left preconditioning by an approximate inverse of mid(A).
/// The solution set of (Y A) x = Y b contains that of A x = b for any point Y.
Box imat_solve_preconditioned(const IMatrix& a, const Box& b);

}  // namespace cgrid
