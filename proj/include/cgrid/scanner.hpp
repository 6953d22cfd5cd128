#pragma once

#include <string>
#include <vector>

namespace cgrid {

// Floating point only. Nothing here is used by any certificate.

struct ScanParams {
  double a_min = 4.0;
  double a_max = 6.0;
  double step = 0.01;
  int transient = 200;  ///< section returns discarded
  int samples = 100;    ///< section returns recorded
  int threads = 0;
};

struct BifurcationSample {
  double a = 0;
  std::vector<double> y;  ///< section y-coordinates in return order
};

/// Returns to {x = 0, y < 0, x' > 0} of the Rössler flow with b = 0.2,
/// by dense-output dopri5 with bisection on the crossings.
std::vector<double> section_returns(double a, int transient, int samples);

/// @throws std::invalid_argument on an empty or non-finite range.
std::vector<BifurcationSample> scan_bifurcation(const ScanParams& p);

/// "a,y" rows behind a comment header.
std::string scan_csv(const std::vector<BifurcationSample>& s);

inline constexpr double kClusterGap = 0.05;

/// Groups sorted values separated by more than gap; returns group means.
std::vector<double> cluster_centers(std::vector<double> y, double gap = kClusterGap);

}  // namespace cgrid
