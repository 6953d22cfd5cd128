#include "cgrid/hsets.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "cgrid/decimal.hpp"

namespace cgrid {

namespace {

Box model_of(const IMatrix& m, const Box& v) {
  try {
    return imat_solve(m, v);
  } catch (const SingularEnclosure&) {
    throw Inconclusive(FailCode::singular, "chart not invertibly enclosed");
  }
}

// Smallest relative slack (r_k - |u_k|) / r_k over the coordinates.
double interior_margin(const AffineHSet& s, const Box& u) {
  double m = INFINITY;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double r = s.radii[k].lo();
    const double slack = rounding::sub_down(r, u[k].mag());
    m = std::fmin(m, slack / r);
  }
  return m;
}

bool strictly_outside(const AffineHSet& s, const Box& u) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double r = s.radii[k].hi();
    if (u[k].lo() > r || u[k].hi() < -r) return true;
  }
  return false;
}

std::size_t widest(const Box& b) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i].width() > b[k].width()) k = i;
  return k;
}

struct LeafResult {
  enum Kind { ok, skipped, failed } kind = failed;
  double margin = 0.0;
  std::string why;
};

struct Task {
  const AffineHSet* source;
  std::vector<const AffineHSet*> targets;
  const AffineHSet* clip_to = nullptr;
  int max_depth;
  std::string label;
};

InclusionReport run_subdivision(const Task& t, const AffineMapEval& f, unsigned threads) {
  InclusionReport rep;
  rep.what = t.label;
  rep.margin = INFINITY;
  std::vector<Box> level{t.source->model_box()};
  for (int depth = 0;; ++depth) {
    rep.depth = depth;
    const auto results = parallel_map<LeafResult>(
        level.size(),
        [&](std::size_t idx) {
          LeafResult lr;
          const Box& u = level[idx];
          try {
            if (t.clip_to) {
              const AffineImage piece{t.source->center, t.source->chart, u};
              if (strictly_outside(*t.clip_to, to_model_coords(*t.clip_to, piece))) {
                lr.kind = LeafResult::skipped;
                return lr;
              }
            }
            const AffineImage img = f(t.source->center, t.source->chart, u);
            double m = INFINITY;
            for (const AffineHSet* target : t.targets) m = std::fmin(m, interior_margin(*target, to_model_coords(*target, img)));
            lr.margin = m;
            lr.kind = m > 0 ? LeafResult::ok : LeafResult::failed;
            if (m <= 0) lr.why = "image not strictly inside target";
          } catch (const Inconclusive& e) {
            lr.kind = LeafResult::failed;
            lr.why = std::string(to_string(e.code())) + ": " + e.what();
          }
          return lr;
        },
        threads);
    std::vector<Box> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const LeafResult& r = results[i];
      if (r.kind == LeafResult::ok) {
        ++rep.boxes;
        rep.margin = std::fmin(rep.margin, r.margin);
      } else if (r.kind == LeafResult::failed) {
        if (depth >= t.max_depth) {
          rep.status = CheckStatus::inconclusive;
          rep.offending = level[i];
          rep.what = t.label + ": subdivision cap reached (" + r.why + ")";
          rep.margin = r.margin;
          return rep;
        }
        auto [a, b] = split(level[i], widest(level[i]));
        next.push_back(a);
        next.push_back(b);
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  if (rep.boxes == 0) {
    // every piece lay outside the clipping set, so the clipped cube is empty
    rep.status = CheckStatus::fail;
    rep.what = t.label + ": cube does not meet the outer set";
    rep.margin = 0.0;
    return rep;
  }
  rep.status = CheckStatus::pass;
  return rep;
}

}  // namespace

AffineHSet AffineHSet::from_text(std::vector<std::string> center, std::vector<std::string> chart, std::vector<std::string> radii) {
  const std::size_t d = center.size();
  if (d == 0 || chart.size() != d * d || radii.size() != d) throw std::invalid_argument("h-set: inconsistent dimensions");
  AffineHSet s;
  s.center = Box(d);
  s.chart = IMatrix(d, d);
  s.radii = Box(d);
  for (std::size_t i = 0; i < d; ++i) {
    s.center[i] = parse_decimal(center[i]);
    s.radii[i] = parse_decimal(radii[i]);
    if (!(s.radii[i].lo() > 0)) throw std::invalid_argument("h-set: radii must be positive");
    for (std::size_t j = 0; j < d; ++j) s.chart(i, j) = parse_decimal(chart[i * d + j]);
  }
  s.center_text = std::move(center);
  s.chart_text = std::move(chart);
  s.radii_text = std::move(radii);
  // fail early on a chart that cannot be inverted
  model_of(s.chart, Box(d));
  return s;
}

AffineHSet AffineHSet::from_values(const PVector& center, const PMatrix& chart, const PVector& radii) {
  std::vector<std::string> c, m, r;
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    c.push_back(format_double(center[i]));
    r.push_back(format_double(radii[i]));
    for (Eigen::Index j = 0; j < chart.cols(); ++j) m.push_back(format_double(chart(i, j)));
  }
  return from_text(c, m, r);
}

Box AffineHSet::model_box() const {
  Box b(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) b[i] = Interval(-radii[i].hi(), radii[i].hi());
  return b;
}

Box to_model_coords(const AffineHSet& s, const Box& x) { return model_of(s.chart, x - s.center); }

Box AffineImage::hull() const {
  if (lin.cols() == 0) return offset;
  return offset + lin * coeffs;
}

Box to_model_coords(const AffineHSet& s, const AffineImage& img) {
  Box u = model_of(s.chart, img.offset - s.center);
  if (img.lin.cols() == 0) return u;
  IMatrix sol;
  try {
    sol = imat_solve(s.chart, img.lin);
  } catch (const SingularEnclosure&) {
    throw Inconclusive(FailCode::singular, "chart not invertibly enclosed");
  }
  return u + sol * img.coeffs;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

InclusionReport check_horizontal_covering(const AffineHSet& target, const Box& image, const Box& image_left, const Box& image_right) {
  InclusionReport rep;
  rep.what = "horizontal covering";
  const std::size_t d = target.dim();
  if (image.size() != d || image_left.size() != d || image_right.size() != d)
    throw std::invalid_argument("check_horizontal_covering: dimension mismatch");
  double margin = INFINITY;
  if (!image[0].is_finite()) {
    rep.what = "image exit coordinate not finite";
    return rep;
  }
  for (std::size_t k = 1; k < d; ++k) {
    const double r = target.radii[k].lo();
    const double slack = rounding::sub_down(r, image[k].mag()) / r;
    if (!(slack > 0)) {
      rep.what = "image leaves the horizontal boundary";
      rep.margin = slack;
      return rep;
    }
    margin = std::fmin(margin, slack);
  }
  const double r1 = target.radii[0].hi();
  auto below = [&](const Interval& u) { return (-r1 - u.hi()) / r1; };
  auto above = [&](const Interval& u) { return (u.lo() - r1) / r1; };
  const double straight = std::fmin(below(image_left[0]), above(image_right[0]));
  const double swapped = std::fmin(above(image_left[0]), below(image_right[0]));
  if (straight > 0) {
    rep.status = CheckStatus::pass;
    rep.margin = std::fmin(margin, straight);
  } else if (swapped > 0) {
    rep.status = CheckStatus::pass;
    rep.swapped = true;
    rep.margin = std::fmin(margin, swapped);
  } else {
    rep.what = "faces not mapped strictly across the target";
    rep.margin = std::fmax(straight, swapped);
  }
  return rep;
}

void validate_grid(const ContractingGridSpec& g) {
  const std::size_t n = g.cubes.size();
  if (n < 2) throw std::invalid_argument("grid needs at least two cubes");
  if (g.next.size() != n || g.clip.size() != n) throw std::invalid_argument("grid successor map or clip flags have the wrong length");
  const std::size_t d = g.outer.dim();
  for (const auto& c : g.cubes)
    if (c.dim() != d) throw std::invalid_argument("grid cube dimension differs from the outer set");
  // the successor map must be a single n-cycle
  std::vector<bool> seen(n, false);
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (g.next[i] >= n) throw std::invalid_argument("grid successor index out of range");
    if (seen[i]) throw std::invalid_argument("grid successor map is not a single cycle");
    seen[i] = true;
    i = g.next[i];
  }
  if (i != 0) throw std::invalid_argument("grid successor map is not a single cycle");
  std::vector<double> centers;
  for (const auto& c : g.cubes) centers.push_back(to_model_coords(g.outer, c.center)[0].mid());
  std::sort(centers.begin(), centers.end());
  for (std::size_t k = 1; k < n; ++k)
    if (!(centers[k] > centers[k - 1])) throw std::invalid_argument("cube centers coincide along the exit axis");
}

GridReport verify_contracting_grid(const ContractingGridSpec& g, const AffineMapEval& f, const SubdivisionPolicy& pol) {
  validate_grid(g);
  const unsigned threads = worker_threads(pol.threads);
  GridReport out;
  out.verified = true;
  for (std::size_t i = 0; i < g.cubes.size(); ++i) {
    Task t;
    t.source = &g.cubes[i];
    t.targets = {&g.cubes[g.next[i]], &g.outer};
    if (g.clip[i]) t.clip_to = &g.outer;
    t.max_depth = pol.max_depth;
    t.label = "cube " + std::to_string(i + 1) + " -> cube " + std::to_string(g.next[i] + 1);
    out.cubes.push_back(run_subdivision(t, f, threads));
    if (out.cubes.back().status != CheckStatus::pass) {
      out.verified = false;
      return out;
    }
  }
  Task t;
  t.source = &g.outer;
  t.targets = {&g.outer};
  t.max_depth = pol.outer_max_depth;
  t.label = "outer set -> outer set";
  out.outer = run_subdivision(t, f, threads);
  out.verified = out.outer.status == CheckStatus::pass;
  return out;
}

Interval exit_extent(const AffineHSet& outer, const AffineHSet& s) {
  return to_model_coords(outer, AffineImage{s.center, s.chart, s.model_box()})[0];
}

SpatialPattern spatial_pattern(const ContractingGridSpec& g) {
  const std::size_t n = g.cubes.size();
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) key[i] = exit_extent(g.outer, g.cubes[i]).mid();
  SpatialPattern p;
  p.cube_at.resize(n);
  std::iota(p.cube_at.begin(), p.cube_at.end(), 0);
  std::stable_sort(p.cube_at.begin(), p.cube_at.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  std::vector<int> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[p.cube_at[k]] = static_cast<int>(k) + 1;
  p.sigma.resize(n);
  for (std::size_t k = 0; k < n; ++k) p.sigma[k] = pos[g.next[p.cube_at[k]]];
  return p;
}

std::vector<SegmentHSet> segments_from_intervals(const ContractingGridSpec& g, const std::vector<std::pair<int, int>>& intervals) {
  const SpatialPattern sp = spatial_pattern(g);
  const int n = static_cast<int>(g.cubes.size());
  // cubes must not overlap along the exit axis for segments to exist
  for (int k = 1; k < n; ++k) {
    const Interval a = exit_extent(g.outer, g.cubes[sp.cube_at[static_cast<std::size_t>(k - 1)]]);
    const Interval b = exit_extent(g.outer, g.cubes[sp.cube_at[static_cast<std::size_t>(k)]]);
    if (!(a.hi() < b.lo())) throw std::invalid_argument("cubes overlap along the exit axis");
  }
  const std::size_t d = g.outer.dim();
  std::vector<SegmentHSet> out;
  for (auto [i, j] : intervals) {
    if (i < 1 || j > n || i >= j) throw std::invalid_argument("O-interval out of range");
    const double beta = exit_extent(g.outer, g.cubes[sp.cube_at[static_cast<std::size_t>(i - 1)]]).hi();
    const double alpha = exit_extent(g.outer, g.cubes[sp.cube_at[static_cast<std::size_t>(j - 1)]]).lo();
    SegmentHSet seg;
    seg.i = i;
    seg.j = j;
    AffineHSet& s = seg.set;
    s.chart = g.outer.chart;
    s.chart_text = g.outer.chart_text;
    Box shift(d);
    shift[0] = (Interval(alpha) + Interval(beta)) / Interval(2.0);
    s.center = g.outer.center + g.outer.chart * shift;
    s.radii = g.outer.radii;
    s.radii[0] = (Interval(alpha) - Interval(beta)) / Interval(2.0);
    s.radii_text = g.outer.radii_text;
    s.radii_text[0] = format_double(s.radii[0].mid());
    s.center_text.clear();
    for (std::size_t k = 0; k < d; ++k) s.center_text.push_back(format_double(s.center[k].mid()));
    out.push_back(std::move(seg));
  }
  return out;
}

unsigned worker_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("CGRID_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace cgrid
