#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cgrid/flow.hpp"
#include "cgrid/linalg.hpp"

namespace cgrid {

/// Parallelepiped { c + M u : |u_k| ≤ r_k } with exit direction u_1.
/// The decimal literals of the data are kept next to their enclosures.
struct AffineHSet {
  std::vector<std::string> center_text;
  std::vector<std::string> chart_text;  ///< row-major
  std::vector<std::string> radii_text;
  Box center;
  IMatrix chart;
  Box radii;  ///< enclosures of the exact radii

  static AffineHSet from_text(std::vector<std::string> center, std::vector<std::string> chart, std::vector<std::string> radii);
  /// Exactly representable data (tests and synthetic grids).
  static AffineHSet from_values(const PVector& center, const PMatrix& chart, const PVector& radii);

  std::size_t dim() const { return center.size(); }
  /// Model box [-r, r] using the outer bounds of r, so it covers the set.
  Box model_box() const;
};

/// Enclosure of M^{-1}(x - c).
/// @throws Inconclusive(singular) when the chart is not invertibly enclosed.
Box to_model_coords(const AffineHSet& s, const Box& x);

/// { offset + lin u : u ∈ coeffs } with offset a box; lin may have zero
/// columns. This is how map images are handed to the covering checks.
struct AffineImage {
  Box offset;
  IMatrix lin;
  Box coeffs;

  Box hull() const;
};

/// Image in the model coordinates of s.
Box to_model_coords(const AffineHSet& s, const AffineImage& img);

enum class CheckStatus { pass, fail, inconclusive };
const char* to_string(CheckStatus s);

struct InclusionReport {
  CheckStatus status = CheckStatus::fail;
  std::string what;
  double margin = 0.0;  ///< smallest verified slack (positive on pass)
  int depth = 0;        ///< subdivision depth reached
  long boxes = 0;       ///< leaf boxes whose images were checked
  std::optional<Box> offending;  ///< model box that could not be verified
  bool swapped = false;          ///< orientation branch for coverings
};

/// Horizontal covering of target by the image of an h-set. All images are
/// in target model coordinates: image of the whole set, and of its left and
/// right faces.
InclusionReport check_horizontal_covering(const AffineHSet& target, const Box& image, const Box& image_left,
                                          const Box& image_right);

struct ContractingGridSpec {
  std::string name;
  AffineHSet outer;
  std::vector<AffineHSet> cubes;  ///< orbit order
  std::vector<std::size_t> next;  ///< successor map on cube indices
  std::vector<bool> clip;         ///< cube i is C'_i ∩ outer
  std::string note;               ///< free text carried through JSON
};

void validate_grid(const ContractingGridSpec& g);

/// Rigorous map on sets { c + M u : u ∈ U }.
using AffineMapEval = std::function<AffineImage(const Box& c, const IMatrix& m, const Box& u)>;

struct SubdivisionPolicy {
  int max_depth = 12;
  int outer_max_depth = 12;
  int threads = 0;  ///< 0: hardware concurrency or CGRID_THREADS
};

struct GridReport {
  bool verified = false;
  std::vector<InclusionReport> cubes;
  InclusionReport outer;
};

/// Checks F(C_i) ⊂ int C_next(i) (and ⊂ int G) for every cube and
/// F(G) ⊂ int G, each by adaptive bisection of the source set.
GridReport verify_contracting_grid(const ContractingGridSpec& g, const AffineMapEval& f, const SubdivisionPolicy& pol = {});

/// Extent of a set along the outer chart's exit coordinate.
Interval exit_extent(const AffineHSet& outer, const AffineHSet& s);

/// Spatial order of the cubes: position p ↦ cube index, by ascending exit
/// coordinate, and the induced permutation on positions (1-based images).
struct SpatialPattern {
  std::vector<std::size_t> cube_at;  ///< position -> cube index
  std::vector<int> sigma;            ///< sigma[p-1] = position of the image of position p
};
SpatialPattern spatial_pattern(const ContractingGridSpec& g);

struct SegmentHSet {
  int i = 0, j = 0;  ///< spatial positions, 1-based, i < j
  AffineHSet set;
};

/// Segments between the cubes at positions (i, j) of each O-interval.
std::vector<SegmentHSet> segments_from_intervals(const ContractingGridSpec& g, const std::vector<std::pair<int, int>>& intervals);

/// Thread count from CGRID_THREADS or the hardware.
unsigned worker_threads(int requested = 0);

/// Apply fn to every index in [0, n) on worker threads; results by index.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn, unsigned threads);

}  // namespace cgrid

#include "cgrid/detail/parallel.hpp"
