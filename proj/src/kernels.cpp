#include "imcf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace imcf::kernels {

namespace {

// Lexicographic preference for revolved-diameter ties: larger value wins;
// within 1e-12 relative, smaller |f_i - f_j| wins, then smaller (i, j).
struct RevBest {
  double value = -1.0;
  double fgap = 0.0;
  std::size_t i = 0, j = 0;

  bool better_than(const RevBest& o) const {
    double tol = 1e-12 * std::max(1.0, std::max(value, o.value));
    if (value > o.value + tol) return true;
    if (value < o.value - tol) return false;
    if (fgap < o.fgap - 1e-15) return true;
    if (fgap > o.fgap + 1e-15) return false;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
};

}  // namespace

PairResult max_pairwise_dist2_serial(const std::vector<Vec2>& pts) {
  PairResult best;
  best.value = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d2 = norm2(pts[i] - pts[j]);
      if (d2 > best.value) best = {d2, i, j};
    }
  if (best.value < 0) best.value = 0;
  return best;
}

PairResult max_pairwise_dist2(const std::vector<Vec2>& pts) {
  const std::ptrdiff_t n = std::ptrdiff_t(pts.size());
  std::vector<PairResult> rows(pts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    PairResult r{-1.0, std::size_t(i), std::size_t(i)};
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      double d2 = norm2(pts[i] - pts[j]);
      if (d2 > r.value) r = {d2, std::size_t(i), std::size_t(j)};
    }
    rows[i] = r;
  }
  PairResult best;
  best.value = -1.0;
  for (const auto& r : rows)
    if (r.value > best.value) best = r;
  if (best.value < 0) best.value = 0;
  return best;
}

PairResult max_pairwise_dist2_rev_serial(const std::vector<Vec2>& pts) {
  RevBest best;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j) {
      double dx = pts[i].x - pts[j].x, fs = pts[i].y + pts[j].y;
      RevBest cand{dx * dx + fs * fs, std::fabs(pts[i].y - pts[j].y), i, j};
      if (cand.better_than(best)) best = cand;
    }
  return {std::max(best.value, 0.0), best.i, best.j};
}

PairResult max_pairwise_dist2_rev(const std::vector<Vec2>& pts) {
  const std::ptrdiff_t n = std::ptrdiff_t(pts.size());
  std::vector<RevBest> rows(pts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    RevBest r;
    for (std::ptrdiff_t j = i; j < n; ++j) {
      double dx = pts[i].x - pts[j].x, fs = pts[i].y + pts[j].y;
      RevBest cand{dx * dx + fs * fs, std::fabs(pts[i].y - pts[j].y),
                   std::size_t(i), std::size_t(j)};
      if (cand.better_than(r)) r = cand;
    }
    rows[i] = r;
  }
  RevBest best;
  for (const auto& r : rows)
    if (r.better_than(best)) best = r;
  return {std::max(best.value, 0.0), best.i, best.j};
}

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = norm2(ab);
  if (len2 <= 0) return dist(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * ab);
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double d1 = cross(b - a, c - a);
  double d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c);
  double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double dist_segment_segment(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_cross(a, b, c, d)) return 0.0;
  double m = dist_point_segment(a, c, d);
  m = std::min(m, dist_point_segment(b, c, d));
  m = std::min(m, dist_point_segment(c, a, b));
  m = std::min(m, dist_point_segment(d, a, b));
  return m;
}

namespace {

inline bool adjacent_segments(std::size_t i, std::size_t j, std::size_t nseg,
                              bool closed) {
  // i < j
  if (j == i + 1) return true;
  if (closed && i == 0 && j == nseg - 1) return true;
  return false;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>>
close_nonadjacent_pair_brute_serial(const std::vector<Vec2>& pts, bool closed,
                                    double tol) {
  if (pts.size() < 2) return std::nullopt;
  const std::size_t nseg = pts.size() - 1;
  for (std::size_t i = 0; i < nseg; ++i)
    for (std::size_t j = i + 2; j < nseg; ++j) {
      if (adjacent_segments(i, j, nseg, closed)) continue;
      if (dist_segment_segment(pts[i], pts[i + 1], pts[j], pts[j + 1]) < tol)
        return std::make_pair(i, j);
    }
  return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> close_nonadjacent_pair_brute(
    const std::vector<Vec2>& pts, bool closed, double tol) {
  if (pts.size() < 2) return std::nullopt;
  const std::ptrdiff_t nseg = std::ptrdiff_t(pts.size()) - 1;
  std::vector<std::ptrdiff_t> hit(nseg, -1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nseg; ++i) {
    for (std::ptrdiff_t j = i + 2; j < nseg; ++j) {
      if (adjacent_segments(std::size_t(i), std::size_t(j), std::size_t(nseg),
                            closed))
        continue;
      if (dist_segment_segment(pts[i], pts[i + 1], pts[j], pts[j + 1]) < tol) {
        hit[i] = j;
        break;
      }
    }
  }
  for (std::ptrdiff_t i = 0; i < nseg; ++i)
    if (hit[i] >= 0) return std::make_pair(std::size_t(i), std::size_t(hit[i]));
  return std::nullopt;
}

namespace {

struct SegmentHash {
  double cell = 1.0;
  double ox = 0.0, oy = 0.0;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> table;

  std::int64_t key(std::int64_t cx, std::int64_t cy) const {
    return (cx << 32) ^ (cy & 0xffffffffll);
  }

  template <typename Fn>
  void cells_of(Vec2 a, Vec2 b, double pad, Fn&& fn) const {
    double xlo = std::min(a.x, b.x) - pad, xhi = std::max(a.x, b.x) + pad;
    double ylo = std::min(a.y, b.y) - pad, yhi = std::max(a.y, b.y) + pad;
    auto cx0 = std::int64_t(std::floor((xlo - ox) / cell));
    auto cx1 = std::int64_t(std::floor((xhi - ox) / cell));
    auto cy0 = std::int64_t(std::floor((ylo - oy) / cell));
    auto cy1 = std::int64_t(std::floor((yhi - oy) / cell));
    for (std::int64_t cx = cx0; cx <= cx1; ++cx)
      for (std::int64_t cy = cy0; cy <= cy1; ++cy) fn(key(cx, cy));
  }
};

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> close_nonadjacent_pair(
    const std::vector<Vec2>& pts, bool closed, double tol) {
  if (pts.size() < 2) return std::nullopt;
  const std::size_t nseg = pts.size() - 1;
  double max_len = 0.0;
  for (std::size_t i = 0; i < nseg; ++i)
    max_len = std::max(max_len, dist(pts[i], pts[i + 1]));
  SegmentHash hash;
  hash.cell = std::max(max_len + tol, 1e-300);
  hash.ox = pts[0].x;
  hash.oy = pts[0].y;
  hash.table.reserve(2 * nseg);
  for (std::size_t i = 0; i < nseg; ++i)
    hash.cells_of(pts[i], pts[i + 1], 0.5 * tol, [&](std::int64_t k) {
      hash.table[k].push_back(std::uint32_t(i));
    });
  std::optional<std::pair<std::size_t, std::size_t>> best;
  auto consider = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (i == j || adjacent_segments(i, j, nseg, closed)) return;
    if (best && std::make_pair(i, j) >= *best) return;
    if (dist_segment_segment(pts[i], pts[i + 1], pts[j], pts[j + 1]) < tol)
      best = std::make_pair(i, j);
  };
  for (auto& [k, segs] : hash.table) {
    for (std::size_t a = 0; a < segs.size(); ++a)
      for (std::size_t b = a + 1; b < segs.size(); ++b)
        consider(segs[a], segs[b]);
  }
  return best;
}

bool polylines_touch(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                     double tol) {
  if (a.size() < 2 || b.size() < 2) return false;
  const std::size_t na = a.size() - 1, nb = b.size() - 1;
  double max_len = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    max_len = std::max(max_len, dist(a[i], a[i + 1]));
  for (std::size_t i = 0; i < nb; ++i)
    max_len = std::max(max_len, dist(b[i], b[i + 1]));
  SegmentHash hash;
  hash.cell = std::max(max_len + tol, 1e-300);
  hash.ox = a[0].x;
  hash.oy = a[0].y;
  hash.table.reserve(2 * na);
  for (std::size_t i = 0; i < na; ++i)
    hash.cells_of(a[i], a[i + 1], 0.5 * tol, [&](std::int64_t k) {
      hash.table[k].push_back(std::uint32_t(i));
    });
  for (std::size_t j = 0; j < nb; ++j) {
    bool found = false;
    hash.cells_of(b[j], b[j + 1], 0.5 * tol, [&](std::int64_t k) {
      if (found) return;
      auto it = hash.table.find(k);
      if (it == hash.table.end()) return;
      for (auto i : it->second)
        if (dist_segment_segment(a[i], a[i + 1], b[j], b[j + 1]) < tol) {
          found = true;
          return;
        }
    });
    if (found) return true;
  }
  return false;
}

double min_distance_point_polyline(Vec2 p, const std::vector<Vec2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    best = std::min(best, dist_point_segment(p, pts[i], pts[i + 1]));
  return best;
}

double min_distance_polylines_serial(const std::vector<Vec2>& a,
                                     const std::vector<Vec2>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
      best = std::min(best,
                      dist_segment_segment(a[i], a[i + 1], b[j], b[j + 1]));
  return best;
}

double min_distance_polylines(const std::vector<Vec2>& a,
                              const std::vector<Vec2>& b) {
  if (a.size() < 2 || b.size() < 2)
    return std::numeric_limits<double>::infinity();
  const std::ptrdiff_t na = std::ptrdiff_t(a.size()) - 1;
  std::vector<double> rows(na);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < na; ++i) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
      r = std::min(r, dist_segment_segment(a[i], a[i + 1], b[j], b[j + 1]));
    rows[i] = r;
  }
  double best = std::numeric_limits<double>::infinity();
  for (double r : rows) best = std::min(best, r);
  return best;
}

namespace {

double directed_hausdorff_serial(const std::vector<Vec2>& a,
                                 const std::vector<Vec2>& b) {
  double worst = 0.0;
  for (const auto& p : a)
    worst = std::max(worst, min_distance_point_polyline(p, b));
  return worst;
}

double directed_hausdorff(const std::vector<Vec2>& a,
                          const std::vector<Vec2>& b) {
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
  std::vector<double> rows(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rows[i] = min_distance_point_polyline(a[i], b);
  double worst = 0.0;
  for (double r : rows) worst = std::max(worst, r);
  return worst;
}

}  // namespace

double hausdorff_distance_serial(const std::vector<Vec2>& a,
                                 const std::vector<Vec2>& b) {
  return std::max(directed_hausdorff_serial(a, b),
                  directed_hausdorff_serial(b, a));
}

double hausdorff_distance(const std::vector<Vec2>& a,
                          const std::vector<Vec2>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  std::size_t n = poly.size();
  if (n >= 2 && dist(poly.front(), poly.back()) == 0.0) --n;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[j];
    const Vec2& b = poly[i];
    if ((b.y > p.y) != (a.y > p.y)) {
      double xc = b.x + (p.y - b.y) / (a.y - b.y) * (a.x - b.x);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

RegionMask rasterize_polygon(const std::vector<Vec2>& poly, std::size_t nx,
                             std::size_t ny, double pad) {
  RegionMask m;
  if (poly.size() < 3 || nx == 0 || ny == 0) return m;
  double xlo = poly[0].x, xhi = poly[0].x, ylo = poly[0].y, yhi = poly[0].y;
  for (const auto& p : poly) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  m.x0 = xlo - pad;
  m.y0 = ylo - pad;
  m.nx = nx;
  m.ny = ny;
  m.dx = (xhi - xlo + 2 * pad) / double(nx);
  m.dy = (yhi - ylo + 2 * pad) / double(ny);
  m.cells.assign(nx * ny, 0);

  std::size_t nv = poly.size();
  if (dist(poly.front(), poly.back()) == 0.0) --nv;
  const std::ptrdiff_t rows = std::ptrdiff_t(ny);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t iy = 0; iy < rows; ++iy) {
    double yc = m.y0 + (double(iy) + 0.5) * m.dy;
    std::vector<double> xs;
    for (std::size_t i = 0, j = nv - 1; i < nv; j = i++) {
      const Vec2& a = poly[j];
      const Vec2& b = poly[i];
      if ((b.y > yc) != (a.y > yc))
        xs.push_back(b.x + (yc - b.y) / (a.y - b.y) * (a.x - b.x));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      auto c0 = std::ptrdiff_t(std::ceil((xs[k] - m.x0) / m.dx - 0.5));
      auto c1 = std::ptrdiff_t(std::floor((xs[k + 1] - m.x0) / m.dx - 0.5));
      c0 = std::max<std::ptrdiff_t>(c0, 0);
      c1 = std::min<std::ptrdiff_t>(c1, std::ptrdiff_t(nx) - 1);
      for (std::ptrdiff_t ix = c0; ix <= c1; ++ix)
        m.cells[std::size_t(iy) * nx + std::size_t(ix)] = 1;
    }
  }
  return m;
}

}  // namespace imcf::kernels
