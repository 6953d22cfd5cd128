#include "cgrid/poly_field.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include "cgrid/decimal.hpp"
#include "cgrid/taylor.hpp"

namespace cgrid {

Monomial::Monomial(std::string text, std::vector<int> exps)
    : coef_text(std::move(text)), coef(parse_decimal(coef_text)), exponents(std::move(exps)) {
  for (int e : exponents)
    if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
}

PolyField::PolyField(std::size_t dim, std::vector<std::vector<Monomial>> components)
    : dim_(dim), components_(std::move(components)) {
  if (dim_ == 0) throw std::invalid_argument("PolyField: dimension must be positive");
  if (components_.size() != dim_) throw std::invalid_argument("PolyField: need one component per coordinate");
  nodes_.resize(dim_);
  // Products are built by multiplying in one variable at a time; prefixes are
  // shared through the cache keyed by (left node, variable).
  std::map<std::pair<int, int>, int> cache;
  terms_.resize(dim_);
  for (std::size_t c = 0; c < dim_; ++c) {
    for (const auto& m : components_[c]) {
      if (m.exponents.size() != dim_) throw std::invalid_argument("PolyField: monomial exponent length mismatch");
      int node = -1;
      int deg = 0;
      for (std::size_t v = 0; v < dim_; ++v) {
        for (int p = 0; p < m.exponents[v]; ++p) {
          ++deg;
          if (node < 0) {
            node = static_cast<int>(v);
            continue;
          }
          auto key = std::make_pair(node, static_cast<int>(v));
          auto it = cache.find(key);
          if (it != cache.end()) {
            node = it->second;
          } else {
            nodes_.push_back({node, static_cast<int>(v)});
            const int id = static_cast<int>(nodes_.size()) - 1;
            cache.emplace(key, id);
            node = id;
          }
        }
      }
      degree_ = std::max(degree_, deg);
      terms_[c].push_back({m.coef, m.coef.mid(), std::strtold(m.coef_text.c_str(), nullptr), node});
    }
  }
}

Box PolyField::eval(const Box& x) const {
  TaylorEngine<Interval> eng(*this);
  eng.run(x.coords(), 1, false);
  Box r(dim_);
  for (std::size_t i = 0; i < dim_; ++i) r[i] = eng.coeff(1, i);
  return r;
}

PVector PolyField::eval(const PVector& x) const {
  TaylorEngine<double> eng(*this);
  std::vector<double> v(x.data(), x.data() + x.size());
  eng.run(v, 1, false);
  PVector r(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i) r[static_cast<Eigen::Index>(i)] = eng.coeff(1, i);
  return r;
}

IMatrix PolyField::jacobian(const Box& x) const {
  TaylorEngine<Interval> eng(*this);
  eng.run(x.coords(), 1, true);
  IMatrix j(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t m = 0; m < dim_; ++m) j(i, m) = eng.grad(1, i, m);
  return j;
}

PMatrix PolyField::jacobian(const PVector& x) const {
  TaylorEngine<double> eng(*this);
  std::vector<double> v(x.data(), x.data() + x.size());
  eng.run(v, 1, true);
  PMatrix j(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t m = 0; m < dim_; ++m) j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = eng.grad(1, i, m);
  return j;
}

std::string PolyField::describe() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < dim_; ++c) {
    os << "x" << c << "' =";
    bool first = true;
    for (const auto& m : components_[c]) {
      os << (first ? " " : " + ") << m.coef_text;
      first = false;
      for (std::size_t v = 0; v < dim_; ++v)
        if (m.exponents[v] > 0) os << "*x" << v << (m.exponents[v] > 1 ? "^" + std::to_string(m.exponents[v]) : "");
    }
    if (first) os << " 0";
    os << '\n';
  }
  return os.str();
}

std::vector<Box> taylor_coeffs(const PolyField& field, const Box& x, int order) {
  if (order < 1) throw std::invalid_argument("taylor_coeffs: order must be >= 1");
  TaylorEngine<Interval> eng(field);
  eng.run(x.coords(), order, false);
  std::vector<Box> out(static_cast<std::size_t>(order) + 1, Box(field.dim()));
  for (int j = 0; j <= order; ++j)
    for (std::size_t i = 0; i < field.dim(); ++i) out[static_cast<std::size_t>(j)][i] = eng.coeff(j, i);
  return out;
}

}  // namespace cgrid
