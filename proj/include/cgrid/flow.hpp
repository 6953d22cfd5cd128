#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cgrid/linalg.hpp"
#include "cgrid/poly_field.hpp"

namespace cgrid {

/// Integrator settings. A step is accepted when the a-priori enclosure
/// validates; the size is chosen from the last two Taylor coefficients.
struct StepPolicy {
  int order = 20;
  double tolerance = 1e-16;  ///< target local error per step
  double h_min = 1e-8;
  double h_max = 0.25;
  double fixed_step = 0.0;   ///< > 0 forces this step size
  int picard_attempts = 30;
  double inflation = 1.1;
};

enum class FailCode { step_underflow, lost_transversality, left_trust_region, singular, newton_failed, subdivision_cap };

const char* to_string(FailCode c);

/// A rigorous computation could not be completed. This never means that the
/// claim being checked is false.
class Inconclusive : public std::runtime_error {
 public:
  Inconclusive(FailCode c, const std::string& what) : std::runtime_error(what), code_(c) {}
  FailCode code() const { return code_; }

 private:
  FailCode code_;
};

/// The set { xhat + C r0 + B e0 : r0 ∈ r, e0 ∈ e }.
///
/// C carries the parametrisation of the initial set (d x p, p may be 0) and
/// is only ever multiplied by point matrices, so it stays exact in shape. B is
/// an orthonormal-ish frame chosen by QR each step so the remainder box e
/// does not wrap.
struct LohnerSet {
  PVector xhat;
  PMatrix C;
  Box r;
  PMatrix B;
  Box e;

  static LohnerSet from_box(const Box& x);
  /// { c + M u : u ∈ u_box } with the chart and center given as enclosures.
  static LohnerSet from_affine(const Box& c, const IMatrix& m, const Box& u_box);

  std::size_t dim() const { return static_cast<std::size_t>(xhat.size()); }
  Box hull() const;
};

/// Enclosure of d Phi_t / dx, kept as Vhat + Q E.
struct VariationalSet {
  PMatrix vhat;
  PMatrix q;
  IMatrix err;

  static VariationalSet identity(std::size_t d);
  IMatrix hull() const;
};

struct StepResult {
  double h = 0.0;
  Box enclosure;   ///< hull of the set at t = h
  Box apriori;     ///< all trajectories on [0, h]
};

/// Z with x + [0,h] f(Z) ⊆ Z, or nullopt when the Picard iteration does not
/// validate within policy.picard_attempts inflations.
std::optional<Box> a_priori_enclosure(const PolyField& field, const Box& x, double h, const StepPolicy& policy = {});

/// W with I + dt Df(z) W ⊆ W: encloses d Phi_s / dx for s ∈ dt along
/// trajectories staying in z.
std::optional<IMatrix> variational_apriori(const PolyField& field, const Box& z, const Interval& dt, const StepPolicy& policy = {});

/// Step size proposal from the floating point Taylor coefficients at x.
double propose_step(const PolyField& field, const PVector& x, const StepPolicy& policy);

/// One validated Taylor step. If v is given it is advanced by the enclosure of
/// the derivative of the step map. h_request > 0 caps the step size.
StepResult one_step(const PolyField& field, LohnerSet& s, const StepPolicy& policy, VariationalSet* v = nullptr,
                    double h_request = 0.0);

/// Integrate exactly to time t (t ≥ 0).
LohnerSet flow_to(const PolyField& field, LohnerSet s, double t, const StepPolicy& policy = {}, VariationalSet* v = nullptr);

/// Flow and first variation to time t.
std::pair<LohnerSet, IMatrix> flow_with_variational(const PolyField& field, const LohnerSet& s, double t,
                                                    const StepPolicy& policy = {});

// Floating point helpers (non-rigorous), used to produce guesses and step
// estimates.

/// Fixed-order Taylor integration of a point to time t.
PVector flow_double(const PolyField& field, const PVector& x, double t, int order = 20, double h_max = 0.05);

}  // namespace cgrid
