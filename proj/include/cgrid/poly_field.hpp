#pragma once

#include <string>
#include <vector>

#include "cgrid/linalg.hpp"

namespace cgrid {

/// One term coef * x_0^e_0 * ... * x_{d-1}^e_{d-1}. The coefficient is kept as
/// the decimal literal it came from and as its tightest enclosure.
struct Monomial {
  std::string coef_text;
  Interval coef;
  std::vector<int> exponents;

  Monomial(std::string text, std::vector<int> exps);
};

/// Polynomial vector field x' = f(x) on R^d.
///
/// The monomials are compiled into a small product program: nodes 0..d-1 are
/// the coordinates and every further node is the product of two earlier
/// nodes. Taylor recurrences and Jacobians run over this program.
class PolyField {
 public:
  struct Node {
    int a = -1;
    int b = -1;
  };
  struct Term {
    Interval coef;
    double coef_mid = 0.0;
    long double coef_ld = 0.0L;  ///< for extended precision reference runs
    int node = -1;  ///< -1 for a constant term
  };

  PolyField(std::size_t dim, std::vector<std::vector<Monomial>> components);

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<Monomial>>& components() const { return components_; }
  const std::vector<Node>& nodes() const { return nodes_; }  ///< includes the d coordinate nodes
  const std::vector<std::vector<Term>>& terms() const { return terms_; }
  int degree() const { return degree_; }

  Box eval(const Box& x) const;
  PVector eval(const PVector& x) const;
  IMatrix jacobian(const Box& x) const;
  PMatrix jacobian(const PVector& x) const;

  /// Human readable listing, e.g. "x0' = -1*x1 + -1*x2".
  std::string describe() const;

 private:
  std::size_t dim_;
  std::vector<std::vector<Monomial>> components_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Term>> terms_;
  int degree_ = 0;
};

}  // namespace cgrid
