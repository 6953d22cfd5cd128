#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cgrid/flow.hpp"
#include "cgrid/hsets.hpp"

namespace cgrid {

/// Hyperplane {x_normal = 0} restricted to the half {sign * x_half > 0},
/// crossed in the direction where sign(x_normal') = direction. Points on the
/// section are given in the remaining coordinates, in their natural order.
struct SectionDef {
  std::size_t normal = 0;
  std::size_t half = 1;
  int half_sign = -1;
  int direction = 1;
  Box trust;  ///< integration aborts outside this box; empty means unbounded

  /// {x = 0, y < 0} in R^3 with x' > 0, trust region |x|,|y| ≤ 50, z ∈ [-10, 100].
  static SectionDef rossler();
  /// Same section with no trust region, dimension d.
  static SectionDef plane(std::size_t d);

  Box embed(const Box& s) const;   ///< section coordinates -> R^d
  IMatrix embedding(std::size_t d) const;
};

struct ReturnResult {
  AffineImage image;   ///< section coordinates
  Interval time;       ///< return time, strictly positive
  int crossing = 1;
  Box crossing_box;    ///< enclosure of the trajectory near the crossing
  std::optional<IMatrix> derivative;  ///< DP w.r.t. section coordinates when requested

  Box hull() const { return image.hull(); }
};

/// First return of the set { c + M u : u ∈ U } (section coordinates).
ReturnResult poincare_image(const SectionDef& sec, const PolyField& field, const Box& c, const IMatrix& m, const Box& u,
                            const StepPolicy& policy = {}, bool with_derivative = false);
/// First return of a box on the section.
ReturnResult poincare_image(const SectionDef& sec, const PolyField& field, const Box& x, const StepPolicy& policy = {});
/// Enclosure of DP over a box on the section.
IMatrix poincare_derivative(const SectionDef& sec, const PolyField& field, const Box& x, const StepPolicy& policy = {});

/// The map evaluator used by grid verification.
AffineMapEval poincare_evaluator(const SectionDef& sec, const PolyField& field, const StepPolicy& policy = {});

// Floating point return map and orbit refinement (non-rigorous).

/// First return of a point; nullopt if no admissible crossing within t_max.
std::optional<PVector> return_map_double(const SectionDef& sec, const PolyField& field, const PVector& s, double* time = nullptr,
                                         double t_max = 200.0);
/// Damped Newton for P(u_i) = u_{i+1}; returns the refined points and the
/// final residual through *residual.
std::vector<PVector> refine_orbit_double(const SectionDef& sec, const PolyField& field, std::vector<PVector> guesses,
                                         double tol = 1e-13, int max_iter = 40, double* residual = nullptr);

struct NewtonPolicy {
  double radius = 1e-9;   ///< initial half-width relative to 1 + |u|
  int attempts = 12;      ///< epsilon-inflation attempts
  int sharpen = 8;        ///< extra contraction steps after success
};

struct OrbitEnclosure {
  int n = 0;
  std::vector<Box> boxes;       ///< section coordinates
  bool unique = false;
  int iterations = 0;
  std::vector<Box> last_newton; ///< N(X) of the last attempt (diagnostics)
};

/// Multiple shooting interval Newton around the given guesses.
/// @throws Inconclusive(newton_failed) if no N(X) ⊂ int X was found.
OrbitEnclosure interval_newton_orbit(const SectionDef& sec, const PolyField& field, int n, const std::vector<PVector>& guesses,
                                     const NewtonPolicy& np = {}, const StepPolicy& policy = {});

struct ScalarNewtonResult {
  Interval x;
  bool unique = false;
  int iterations = 0;
};

/// One-dimensional interval Newton N(X) = m - f(m)/f'(X), iterated until the
/// width is below tol.
ScalarNewtonResult interval_newton_scalar(const std::function<Interval(const Interval&)>& f,
                                          const std::function<Interval(const Interval&)>& df, Interval x, double tol = 1e-12,
                                          int max_iter = 50);

}  // namespace cgrid
