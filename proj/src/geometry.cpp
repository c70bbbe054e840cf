#include "imcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imcf/kernels.hpp"

namespace imcf {

namespace {

// View of the distinct samples (drops the duplicated closing vertex).
struct Samples {
  const std::vector<Vec2>& pts;
  std::size_t count;
  bool closed;
  const Vec2& operator[](std::size_t i) const { return pts[i]; }
};

Samples distinct(const ProfileSurface& s) {
  return {s.pts, s.sample_count(), s.closed()};
}

// Neighbors with wrap-around (closed) or even axis reflection (anchored).
Vec2 prev_of(const Samples& q, std::size_t i) {
  if (i > 0) return q[i - 1];
  if (q.closed) return q[q.count - 1];
  return {q[1].x, -q[1].y};
}

Vec2 next_of(const Samples& q, std::size_t i) {
  if (i + 1 < q.count) return q[i + 1];
  if (q.closed) return q[0];
  return {q[q.count - 2].x, -q[q.count - 2].y};
}

double mean_spacing(const ProfileSurface& s) {
  double L = total_length(s);
  std::size_t segs = s.segment_count();
  return segs ? L / double(segs) : 0.0;
}

double nominal_h(const ProfileSurface& s) {
  return s.h > 0 ? s.h : mean_spacing(s);
}

std::pair<Vec2, Vec2> closest_points_segments(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  // Good enough for reporting: sample candidate closest pairs.
  std::pair<Vec2, Vec2> best{a, c};
  double bd = std::numeric_limits<double>::infinity();
  auto try_pt_seg = [&](Vec2 p, Vec2 u, Vec2 v, bool swapped) {
    Vec2 uv = v - u;
    double len2 = norm2(uv);
    double t = len2 > 0 ? std::clamp(dot(p - u, uv) / len2, 0.0, 1.0) : 0.0;
    Vec2 q = u + t * uv;
    double dd = dist(p, q);
    if (dd < bd) {
      bd = dd;
      best = swapped ? std::make_pair(q, p) : std::make_pair(p, q);
    }
  };
  try_pt_seg(a, c, d, false);
  try_pt_seg(b, c, d, false);
  try_pt_seg(c, a, b, true);
  try_pt_seg(d, a, b, true);
  return best;
}

}  // namespace

double total_length(const ProfileSurface& s) {
  double L = 0;
  for (std::size_t i = 0; i + 1 < s.pts.size(); ++i)
    L += dist(s.pts[i], s.pts[i + 1]);
  return L;
}

void normalize_orientation(ProfileSurface& s) {
  if (s.pts.size() < 3) return;
  if (s.closed()) {
    double a2 = 0;
    for (std::size_t i = 0; i + 1 < s.pts.size(); ++i)
      a2 += cross(s.pts[i], s.pts[i + 1]);
    if (a2 < 0) std::reverse(s.pts.begin(), s.pts.end());
  } else {
    if (s.pts.front().x > s.pts.back().x)
      std::reverse(s.pts.begin(), s.pts.end());
  }
}

ProfileSurface translated(const ProfileSurface& s, Vec2 delta) {
  ProfileSurface out = s;
  for (auto& p : out.pts) p = p + delta;
  return out;
}

ProfileSurface reflected_x(const ProfileSurface& s, double x0) {
  ProfileSurface out = s;
  for (auto& p : out.pts) p.x = 2 * x0 - p.x;
  std::reverse(out.pts.begin(), out.pts.end());
  return out;
}

ProfileSurface resample_arclength(const ProfileSurface& s, std::size_t m) {
  if (m < 16) throw InvalidParams("resample_arclength: m >= 16 required");
  if (s.sample_count() < 4)
    throw InvalidParams("resample_arclength: need at least 4 samples");
  double L = total_length(s);
  if (L < 1e-9) throw DegenerateCurve("resample_arclength: zero length");

  Samples q = distinct(s);
  const std::size_t K = q.count;

  // Chord-length knots. For closed curves the chain wraps back to q[0].
  const std::size_t nseg = s.closed() ? K : K - 1;
  std::vector<double> knot(K + (s.closed() ? 1 : 0), 0.0);
  for (std::size_t i = 0; i < nseg; ++i)
    knot[i + 1] = knot[i] + dist(q[i], next_of(q, i));
  const double Ltot = knot[nseg];

  // Catmull-Rom tangents (finite-difference form) at the distinct samples.
  std::vector<Vec2> tan(K);
  for (std::size_t i = 0; i < K; ++i) {
    Vec2 pm = prev_of(q, i), pp = next_of(q, i);
    double dm = dist(pm, q[i]), dp = dist(q[i], pp);
    double span = dm + dp;
    tan[i] = span > 0 ? (pp - pm) / span : Vec2{0, 0};
  }

  auto eval = [&](std::size_t seg, double u) {
    // Hermite on [knot[seg], knot[seg]+hseg] with parameter u in [0,1].
    Vec2 p0 = q[seg];
    Vec2 p1 = s.closed() && seg + 1 == K ? q[0] : q[seg + 1];
    Vec2 m0 = tan[seg];
    Vec2 m1 = s.closed() && seg + 1 == K ? tan[0] : tan[seg + 1];
    double hseg = knot[seg + 1] - knot[seg];
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * hseg * m0 +
           (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * hseg * m1;
  };

  ProfileSurface out;
  out.n = s.n;
  out.topology = s.topology;
  const std::size_t targets = s.closed() ? m : m;
  out.pts.reserve(targets + (s.closed() ? 1 : 0));
  std::size_t seg = 0;
  for (std::size_t k = 0; k < targets; ++k) {
    double u = s.closed() ? Ltot * double(k) / double(m)
                          : Ltot * double(k) / double(m - 1);
    while (seg + 1 < nseg && knot[seg + 1] < u) ++seg;
    double hseg = knot[seg + 1] - knot[seg];
    double t = hseg > 0 ? (u - knot[seg]) / hseg : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    out.pts.push_back(eval(seg, t));
  }
  if (s.closed()) {
    out.pts.push_back(out.pts.front());
    out.h = Ltot / double(m);
  } else {
    out.pts.front() = q[0];
    out.pts.back() = q[K - 1];
    if (s.n >= 2) {
      out.pts.front().y = 0.0;
      out.pts.back().y = 0.0;
      for (std::size_t i = 1; i + 1 < out.pts.size(); ++i)
        out.pts[i].y = std::max(out.pts[i].y, 0.0);
    }
    out.h = Ltot / double(m - 1);
  }
  return out;
}

std::vector<Vec2> tangents(const ProfileSurface& s) {
  Samples q = distinct(s);
  std::vector<Vec2> T(q.count);
  for (std::size_t i = 0; i < q.count; ++i)
    T[i] = normalized(next_of(q, i) - prev_of(q, i));
  return T;
}

std::vector<Vec2> normals(const ProfileSurface& s) {
  std::vector<Vec2> N = tangents(s);
  if (s.closed())
    for (auto& t : N) t = Vec2{t.y, -t.x};
  else
    for (auto& t : N) t = Vec2{-t.y, t.x};
  return N;
}

std::vector<double> profile_curvature(const ProfileSurface& s) {
  Samples q = distinct(s);
  std::vector<double> k(q.count, 0.0);
  const double sign = s.closed() ? 1.0 : -1.0;
  for (std::size_t i = 0; i < q.count; ++i) {
    Vec2 pm = prev_of(q, i), pp = next_of(q, i);
    Vec2 e0 = q[i] - pm, e1 = pp - q[i];
    double l0 = norm(e0), l1 = norm(e1);
    if (l0 <= 0 || l1 <= 0) {
      k[i] = 0;
      continue;
    }
    double dtheta = std::atan2(cross(e0, e1), dot(e0, e1));
    k[i] = sign * dtheta / (0.5 * (l0 + l1));
  }
  return k;
}

std::vector<double> mean_curvature(const ProfileSurface& s) {
  std::vector<double> H = profile_curvature(s);
  if (s.n <= 1) return H;
  Samples q = distinct(s);
  std::vector<Vec2> N = normals(s);
  for (std::size_t i = 0; i < q.count; ++i) {
    bool anchor = !s.closed() && (i == 0 || i + 1 == q.count);
    if (anchor) {
      H[i] = double(s.n) * H[i];
      continue;
    }
    double f = q[i].y;
    if (f < 1e-9)
      throw AxisSingularity("mean_curvature: f ~ 0 at non-anchor sample");
    H[i] = H[i] + double(s.n - 1) * N[i].y / f;
  }
  return H;
}

double area(const ProfileSurface& s) {
  if (s.n <= 1) return total_length(s);
  double A = 0;
  for (std::size_t i = 0; i + 1 < s.pts.size(); ++i) {
    double slant = dist(s.pts[i], s.pts[i + 1]);
    A += M_PI * (s.pts[i].y + s.pts[i + 1].y) * slant;
  }
  return A;
}

double enclosed_volume(const ProfileSurface& s) {
  if (s.n <= 1) {
    double a2 = 0;
    for (std::size_t i = 0; i + 1 < s.pts.size(); ++i)
      a2 += cross(s.pts[i], s.pts[i + 1]);
    return 0.5 * a2;
  }
  double S = 0;
  for (std::size_t i = 0; i + 1 < s.pts.size(); ++i) {
    double f0 = s.pts[i].y, f1 = s.pts[i + 1].y;
    S += (f0 * f0 + f0 * f1 + f1 * f1) / 3.0 * (s.pts[i + 1].x - s.pts[i].x);
  }
  return s.closed() ? -M_PI * S : M_PI * S;
}

DiameterInfo diameter_info(const ProfileSurface& s) {
  Samples q = distinct(s);
  std::vector<Vec2> pts(s.pts.begin(), s.pts.begin() + std::ptrdiff_t(q.count));
  DiameterInfo out;
  if (s.n <= 1) {
    auto r = kernels::max_pairwise_dist2(pts);
    out.value = std::sqrt(r.value);
    out.a = pts[r.i];
    out.b = pts[r.j];
  } else {
    auto r = kernels::max_pairwise_dist2_rev(pts);
    out.value = std::sqrt(r.value);
    out.a = pts[r.i];
    out.b = {pts[r.j].x, -pts[r.j].y};
  }
  return out;
}

double diameter(const ProfileSurface& s) { return diameter_info(s).value; }

InradiusInfo inradius_info(const ProfileSurface& s) {
  if (self_intersects(s)) throw NotEmbedded("inradius: surface not embedded");
  double xlo = s.pts[0].x, xhi = xlo, ylo = s.pts[0].y, yhi = ylo;
  for (const auto& p : s.pts) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  if (s.n >= 2) ylo = 0.0;

  auto usable = [&](Vec2 c) {
    if (s.n >= 2 && c.y < 0) return false;
    return point_inside(s, c);
  };
  auto score = [&](Vec2 c) {
    return kernels::min_distance_point_polyline(c, s.pts);
  };

  const std::size_t G = 96;
  double dx = (xhi - xlo) / double(G), dy = (yhi - ylo) / double(G);
  struct Cand {
    double d = -1;
    Vec2 c;
  };
  std::vector<Cand> grid(G * G);
  const std::ptrdiff_t rows = std::ptrdiff_t(G);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t iy = 0; iy < rows; ++iy)
    for (std::size_t ix = 0; ix < G; ++ix) {
      Vec2 c{xlo + (double(ix) + 0.5) * dx, ylo + (double(iy) + 0.5) * dy};
      if (usable(c)) grid[std::size_t(iy) * G + ix] = {score(c), c};
    }

  // Seeds: best cell of each 6x6 block, top 8 overall (first index wins ties).
  std::vector<Cand> seeds;
  const std::size_t B = 16;
  for (std::size_t by = 0; by < G; by += B)
    for (std::size_t bx = 0; bx < G; bx += B) {
      Cand best;
      for (std::size_t iy = by; iy < std::min(by + B, G); ++iy)
        for (std::size_t ix = bx; ix < std::min(bx + B, G); ++ix)
          if (grid[iy * G + ix].d > best.d) best = grid[iy * G + ix];
      if (best.d > 0) seeds.push_back(best);
    }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const Cand& a, const Cand& b) { return a.d > b.d; });
  if (seeds.size() > 8) seeds.resize(8);
  if (seeds.empty()) throw InvalidGeometry("inradius: empty region");

  Cand global;
  for (auto seed : seeds) {
    Cand cur = seed;
    double rad = std::max(dx, dy);
    while (true) {
      Cand next = cur;
      for (int iy = -4; iy <= 4; ++iy)
        for (int ix = -4; ix <= 4; ++ix) {
          Vec2 c{cur.c.x + rad * double(ix) / 4.0,
                 cur.c.y + rad * double(iy) / 4.0};
          if (!usable(c)) continue;
          double d = score(c);
          if (d > next.d) next = {d, c};
        }
      bool improved = next.d > cur.d + 1e-3 * cur.d * 0.1;
      cur = next;
      rad *= 0.5;
      if (!improved && rad < 1e-3 * cur.d) break;
      if (rad < 1e-12) break;
    }
    if (cur.d > global.d) global = cur;
  }
  return {global.d, global.c};
}

double inradius(const ProfileSurface& s) { return inradius_info(s).value; }

std::optional<IntersectionReport> self_intersects(const ProfileSurface& s) {
  if (s.pts.size() < 3) return std::nullopt;
  if (s.n >= 2) {
    Samples q = distinct(s);
    for (std::size_t i = 0; i < q.count; ++i) {
      bool anchor = !s.closed() && (i == 0 || i + 1 == q.count);
      if (!anchor && q[i].y < 0)
        return IntersectionReport{IntersectionKind::AxisCrossing, i, i, q[i]};
    }
  }
  double tol = 0.25 * nominal_h(s);
  auto hit = kernels::close_nonadjacent_pair(s.pts, s.closed(), tol);
  if (!hit) return std::nullopt;
  auto [i, j] = *hit;
  auto [pa, pb] = closest_points_segments(s.pts[i], s.pts[i + 1], s.pts[j],
                                          s.pts[j + 1]);
  return IntersectionReport{IntersectionKind::SegmentPair, i, j,
                            0.5 * (pa + pb)};
}

bool point_inside(const ProfileSurface& s, Vec2 p) {
  if (s.n <= 1) return kernels::point_in_polygon(p, s.pts);
  double f = std::fabs(p.y);
  if (f < 1e-12) {
    if (s.closed()) return kernels::point_in_polygon({p.x, 0.0}, s.pts);
    double xl = s.pts.front().x, xr = s.pts.back().x;
    return p.x > std::min(xl, xr) && p.x < std::max(xl, xr);
  }
  return kernels::point_in_polygon({p.x, f}, s.pts);
}

std::size_t ray_crossings(const ProfileSurface& s, Vec2 c, Vec2 d) {
  // half-open straddle rule on the signed distance from the ray line, so a
  // vertex exactly on the ray counts once, not per adjacent segment
  std::size_t count = 0;
  const std::size_t nseg = s.segment_count();
  for (std::size_t i = 0; i < nseg; ++i) {
    Vec2 a = s.pts[i], b = s.pts[i + 1];
    double sa = cross(d, a - c), sb = cross(d, b - c);
    if ((sa > 0.0) == (sb > 0.0)) continue;
    double t = cross(a - c, b - a) / cross(d, b - a);
    if (t > 1e-12) ++count;
  }
  return count;
}

namespace {

// Single positive intersection parameter of the ray with the polyline, if the
// crossing is unique.
std::optional<double> ray_single_hit(const ProfileSurface& s, Vec2 c, Vec2 d) {
  std::optional<double> hit;
  const std::size_t nseg = s.segment_count();
  for (std::size_t i = 0; i < nseg; ++i) {
    Vec2 a = s.pts[i], b = s.pts[i + 1];
    double sa = cross(d, a - c), sb = cross(d, b - c);
    if ((sa > 0.0) == (sb > 0.0)) continue;
    double t = cross(a - c, b - a) / cross(d, b - a);
    if (t > 1e-12) {
      if (hit) return std::nullopt;
      hit = t;
    }
  }
  return hit;
}

}  // namespace

RadialGraph to_radial_graph(const ProfileSurface& s, Vec2 center,
                            std::size_t m) {
  if (m < 8) throw InvalidParams("to_radial_graph: m >= 8 required");
  RadialGraph g;
  g.n = s.n;
  g.center = center;
  g.r.resize(m);
  if (s.n >= 2) {
    if (std::fabs(center.y) > 1e-12)
      throw InvalidParams("to_radial_graph: center must lie on the axis");
    center.y = 0.0;
  }
  if (!point_inside(s, center))
    throw NotAGraph("to_radial_graph: center not enclosed");
  for (std::size_t j = 0; j < m; ++j) {
    double ang = s.n <= 1 ? 2.0 * M_PI * double(j) / double(m)
                          : M_PI * double(j) / double(m - 1);
    if (s.n >= 2 && (j == 0 || j + 1 == m)) {
      // axial rays pass through the anchors; read them off directly
      const double r = j == 0 ? s.pts.back().x - center.x
                              : center.x - s.pts.front().x;
      if (!(r > 0))
        throw NotAGraph("to_radial_graph: center beyond an anchor");
      g.r[j] = r;
      continue;
    }
    Vec2 d{std::cos(ang), std::sin(ang)};
    auto t = ray_single_hit(s, center, d);
    if (!t) throw NotAGraph("to_radial_graph: ray crossing count != 1");
    g.r[j] = *t;
  }
  return g;
}

ProfileSurface from_radial_graph(const RadialGraph& g) {
  ProfileSurface s;
  s.n = g.n;
  s.topology = g.n <= 1 ? Topology::ClosedLoop : Topology::AxisAnchored;
  const std::size_t m = g.r.size();
  s.pts.reserve(m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    double ang = g.n <= 1 ? 2.0 * M_PI * double(j) / double(m)
                          : M_PI * double(j) / double(m - 1);
    s.pts.push_back(g.center +
                    g.r[j] * Vec2{std::cos(ang), std::sin(ang)});
  }
  if (g.n <= 1) {
    s.pts.push_back(s.pts.front());
  } else {
    s.pts.front().y = 0.0;
    s.pts.back().y = 0.0;
  }
  s.h = mean_spacing(s);
  return s;
}

}  // namespace imcf
