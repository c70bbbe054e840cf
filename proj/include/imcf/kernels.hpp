#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "imcf/geometry.hpp"

// Data-parallel geometry kernels. Each hot kernel has an OpenMP-parallel
// production version and a *_serial reference used by tests and the
// benchmark; both are deterministic (parallel reductions keep per-row
// results and merge them in index order).
namespace imcf::kernels {

struct PairResult {
  double value = 0.0;  // squared distance
  std::size_t i = 0, j = 0;
};

// Max pairwise squared Euclidean distance (plane curves).
PairResult max_pairwise_dist2(const std::vector<Vec2>& pts);
PairResult max_pairwise_dist2_serial(const std::vector<Vec2>& pts);

// Max pairwise squared revolved distance dx^2 + (f_i + f_j)^2 over half-plane
// samples (x, f >= 0); i = j is allowed (point against its own opposite
// azimuth). Ties within 1e-12 relative prefer the smaller |f_i - f_j|, then
// lexicographic (i, j).
PairResult max_pairwise_dist2_rev(const std::vector<Vec2>& pts);
PairResult max_pairwise_dist2_rev_serial(const std::vector<Vec2>& pts);

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b);
double dist_segment_segment(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Smallest (lexicographic) pair of non-adjacent segments of the polyline at
// distance < tol, if any. `closed` marks the wrap-around segment pair
// adjacency. Production version uses a spatial hash; the brute-force
// versions scan all pairs.
std::optional<std::pair<std::size_t, std::size_t>> close_nonadjacent_pair(
    const std::vector<Vec2>& pts, bool closed, double tol);
std::optional<std::pair<std::size_t, std::size_t>> close_nonadjacent_pair_brute(
    const std::vector<Vec2>& pts, bool closed, double tol);
std::optional<std::pair<std::size_t, std::size_t>>
close_nonadjacent_pair_brute_serial(const std::vector<Vec2>& pts, bool closed,
                                    double tol);

// True iff any segment of polyline a comes within tol of any segment of b.
bool polylines_touch(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                     double tol);

double min_distance_point_polyline(Vec2 p, const std::vector<Vec2>& pts);

// Min distance between segments of two polylines.
double min_distance_polylines(const std::vector<Vec2>& a,
                              const std::vector<Vec2>& b);
double min_distance_polylines_serial(const std::vector<Vec2>& a,
                                     const std::vector<Vec2>& b);

// Symmetric Hausdorff distance, each side measured point-to-polyline.
double hausdorff_distance(const std::vector<Vec2>& a,
                          const std::vector<Vec2>& b);
double hausdorff_distance_serial(const std::vector<Vec2>& a,
                                 const std::vector<Vec2>& b);

// Even-odd test against a closed polygon (first point need not be repeated).
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly);

// Rasterized region membership mask over a bounding box, built by scanline
// parity fill of a polygon. Lookup is O(1).
struct RegionMask {
  double x0 = 0, y0 = 0, dx = 1, dy = 1;
  std::size_t nx = 0, ny = 0;
  std::vector<unsigned char> cells;  // row-major, 1 = inside

  bool inside(Vec2 p) const {
    double gx = (p.x - x0) / dx, gy = (p.y - y0) / dy;
    if (gx < 0 || gy < 0) return false;
    std::size_t ix = std::size_t(gx), iy = std::size_t(gy);
    if (ix >= nx || iy >= ny) return false;
    return cells[iy * nx + ix] != 0;
  }
};

// Polygon given without the duplicated closing vertex or with it (both
// accepted). pad widens the bounding box on every side.
RegionMask rasterize_polygon(const std::vector<Vec2>& poly, std::size_t nx,
                             std::size_t ny, double pad);

}  // namespace imcf::kernels
