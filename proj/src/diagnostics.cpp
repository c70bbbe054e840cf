#include "imcf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "imcf/errors.hpp"
#include "imcf/kernels.hpp"

namespace imcf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Meridian-plane distance from a (possibly signed-y) center to the revolved
// sample (x, f): 3-d distance is minimized at the azimuth of the center.
double point_sample_dist(Vec2 c, Vec2 p, int n) {
  if (n <= 1) return dist(c, p);
  return std::min(dist(c, p), dist(c, Vec2{p.x, -p.y}));
}

// Ray crossing count in the meridian cross-section of a revolved body: the
// generating polyline is joined with its mirror image into one closed curve
// so a crossing at an axis anchor is counted exactly once.
std::size_t cross_section_crossings(const ProfileSurface& s, Vec2 c, Vec2 d) {
  if (s.n <= 1) return ray_crossings(s, c, d);
  ProfileSurface cs;
  cs.n = 1;
  cs.topology = Topology::ClosedLoop;
  cs.pts = s.pts;
  for (std::size_t i = s.pts.size() - 1; i-- > 1;)
    cs.pts.push_back({s.pts[i].x, -s.pts[i].y});
  cs.pts.push_back(cs.pts.front());
  return ray_crossings(cs, c, d);
}

}  // namespace

// ---------------------------------------------------------------------------
// admissibility

namespace {

// Raster scaffolding shared by is_admissible and the reflection_profile
// bisection: the image of the region below the plane is probed on a cell
// lattice of pitch `step`, with region membership answered by a half-pitch
// polygon mask.
struct RegionRaster {
  double step = 0;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;  // sample bounding box
  kernels::RegionMask mask;
};

RegionRaster make_raster(const ProfileSurface& s) {
  RegionRaster r;
  r.xmin = r.ymin = kInf;
  r.xmax = r.ymax = -kInf;
  for (const Vec2& p : s.pts) {
    r.xmin = std::min(r.xmin, p.x);
    r.xmax = std::max(r.xmax, p.x);
    r.ymin = std::min(r.ymin, p.y);
    r.ymax = std::max(r.ymax, p.y);
  }
  const double extent = std::max(r.xmax - r.xmin, r.ymax - r.ymin);
  // resolution tied to h, floored so the cell count stays bounded for very
  // fine samplings (the floor is far below every tolerance we audit at)
  const double floor_step = extent / (s.n <= 1 ? 3000.0 : 800.0);
  r.step = std::max({s.h, floor_step, 1e-9});
  const double half = 0.5 * r.step;
  const auto nmx = static_cast<std::size_t>(
      std::ceil((r.xmax - r.xmin + 2 * r.step) / half) + 2);
  const auto nmy = static_cast<std::size_t>(
      std::ceil((r.ymax - r.ymin + 2 * r.step) / half) + 2);
  r.mask = kernels::rasterize_polygon(s.pts, nmx, nmy, r.step);
  return r;
}

// Max penetration depth of the reflected lower-half cells; scans stop early
// once the depth exceeds `cap` (pass +inf for the exact maximum).
double reflection_violation(const ProfileSurface& s, const RegionRaster& r,
                            Vec2 nu, double lambda, double cap) {
  const double step = r.step;
  double violation = 0;
  int stop = 0;
  if (s.n <= 1) {
    const auto nx =
        static_cast<long>((r.xmax - r.xmin + 2 * step) / step) + 1;
    const auto ny =
        static_cast<long>((r.ymax - r.ymin + 2 * step) / step) + 1;
    for (long j = 0; j < ny && !stop; ++j) {
      for (long i = 0; i < nx; ++i) {
        const Vec2 q = {r.xmin - step + (static_cast<double>(i) + 0.5) * step,
                        r.ymin - step + (static_cast<double>(j) + 0.5) * step};
        const double side = dot(q, nu) - lambda;
        if (side >= 0 || !r.mask.inside(q)) continue;
        const Vec2 qr = q - (2 * side) * nu;
        if (r.mask.inside(qr)) continue;
        violation = std::max(
            violation, kernels::min_distance_point_polyline(qr, s.pts));
        if (violation > cap) {
          stop = 1;
          break;
        }
      }
    }
    return violation;
  }

  // revolved body: loop 3-d cells (z >= 0 half suffices: body and plane are
  // symmetric under z -> -z), membership via the half-plane mask at
  // (x, sqrt(y^2 + z^2))
  const auto nx = static_cast<long>((r.xmax - r.xmin + 2 * step) / step) + 1;
  const auto nyz = static_cast<long>(2 * (r.ymax + step) / step) + 1;
  const auto nz = static_cast<long>((r.ymax + step) / step) + 1;
#pragma omp parallel for collapse(2) reduction(max : violation) \
    schedule(dynamic, 8)
  for (long i = 0; i < nx; ++i) {
    for (long j = 0; j < nyz; ++j) {
      int skip;
#pragma omp atomic read
      skip = stop;
      if (skip) continue;
      const double x = r.xmin - step + (static_cast<double>(i) + 0.5) * step;
      const double y =
          -(r.ymax + step) + (static_cast<double>(j) + 0.5) * step;
      const double side_xy = x * nu.x + y * nu.y - lambda;
      if (side_xy >= 0) continue;  // plane normal has no z-component
      for (long k = 0; k < nz; ++k) {
        const double z = (static_cast<double>(k) + 0.5) * step;
        if (!r.mask.inside({x, std::hypot(y, z)})) continue;
        const double xr = x - 2 * side_xy * nu.x;
        const double yr = y - 2 * side_xy * nu.y;
        const Vec2 qr = {xr, std::hypot(yr, z)};
        if (r.mask.inside(qr)) continue;
        violation = std::max(
            violation, kernels::min_distance_point_polyline(qr, s.pts));
        if (violation > cap) {
#pragma omp atomic write
          stop = 1;
          break;
        }
      }
    }
  }
  return violation;
}

void require_embedded(const ProfileSurface& s, const char* who) {
  if (auto hit = self_intersects(s))
    throw NotEmbedded(std::string(who) + ": surface self-intersects near (" +
                      std::to_string(hit->where.x) + ", " +
                      std::to_string(hit->where.y) + ")");
}

}  // namespace

AdmissibilityReport is_admissible(const ProfileSurface& s, const Plane& plane,
                                  double tol) {
  const double nn = norm(plane.nu);
  if (!(nn > 0)) throw InvalidParams("is_admissible: zero plane normal");
  require_embedded(s, "is_admissible");
  if (tol < 0) tol = s.h;
  const RegionRaster raster = make_raster(s);
  AdmissibilityReport rep;
  rep.violation =
      reflection_violation(s, raster, plane.nu / nn, plane.lambda, kInf);
  rep.admissible = rep.violation <= tol;
  return rep;
}

ReflectionProfile reflection_profile(const ProfileSurface& s,
                                     std::size_t directions) {
  if (directions < 2)
    throw InvalidParams("reflection_profile: need at least 2 directions");
  require_embedded(s, "reflection_profile");
  const DiameterInfo di = diameter_info(s);
  ReflectionProfile prof;
  prof.origin = di.midpoint();
  const ProfileSurface centered =
      translated(s, {-prof.origin.x, -prof.origin.y});
  const RegionRaster raster = make_raster(centered);
  const double tol = s.h;

  for (std::size_t k = 0; k < directions; ++k) {
    Vec2 nu;
    if (s.n <= 1) {
      const double th =
          2 * kPi * static_cast<double>(k) / static_cast<double>(directions);
      nu = {std::cos(th), std::sin(th)};
    } else {
      // axisymmetry: only the colatitude of the plane normal matters, and
      // alpha and pi - alpha realize the +/- direction pairs
      const double th =
          kPi * static_cast<double>(k) / static_cast<double>(directions - 1);
      nu = {std::cos(th), std::sin(th)};
    }
    // signed support range of the (revolved) sample set along nu
    double smin = kInf, smax = -kInf;
    for (const Vec2& p : centered.pts) {
      const double base = p.x * nu.x;
      const double swing = (s.n <= 1) ? p.y * nu.y : std::abs(p.y * nu.y);
      smin = std::min(smin, s.n <= 1 ? base + swing : base - swing);
      smax = std::max(smax, base + swing);
    }
    // below lo the reflected side misses every region cell; at hi the whole
    // region reflects past its own support by > tol
    const double margin = 4 * (raster.step + tol);
    double lo = smin - margin, hi = smax + margin;
    while (hi - lo > 0.25 * s.h) {
      const double mid = 0.5 * (lo + hi);
      if (reflection_violation(centered, raster, nu, mid, tol) <= tol)
        lo = mid;
      else
        hi = mid;
    }
    prof.directions.push_back(nu);
    prof.lambda_max.push_back(lo);
    prof.Lambda = std::max(prof.Lambda, -lo);
  }
  prof.Lambda = std::max(prof.Lambda, 0.0);
  return prof;
}

// ---------------------------------------------------------------------------
// star-shapedness

StarReport is_star_shaped(const ProfileSurface& s, Vec2 center) {
  const Vec2 chalf = {center.x, std::abs(center.y)};
  if (!point_inside(s, chalf))
    throw CenterOutside("is_star_shaped: center (" + std::to_string(center.x) +
                        ", " + std::to_string(center.y) +
                        ") is not enclosed");
  StarReport rep;
  const std::size_t D = std::max<std::size_t>(s.sample_count(), 16);
  const bool on_axis = s.n >= 2 && std::abs(center.y) < 1e-12;

  if (s.n <= 1) {
    for (std::size_t k = 0; k < D; ++k) {
      const double th =
          2 * kPi * static_cast<double>(k) / static_cast<double>(D);
      const std::size_t c =
          ray_crossings(s, center, {std::cos(th), std::sin(th)});
      rep.max_crossings = std::max(rep.max_crossings, c);
      if (c != 1) rep.star_shaped = false;
    }
  } else if (on_axis) {
    // meridian half-plane rays; the two axial rays cross anchored profiles
    // exactly once (at the poles) by construction
    const std::size_t Dh = D / 2 + 1;
    for (std::size_t k = 1; k + 1 < Dh; ++k) {
      const double th =
          kPi * static_cast<double>(k) / static_cast<double>(Dh - 1);
      const std::size_t c =
          ray_crossings(s, chalf, {std::cos(th), std::sin(th)});
      rep.max_crossings = std::max(rep.max_crossings, c);
      if (c != 1) rep.star_shaped = false;
    }
  } else {
    // off-axis: rays in the meridian cross-section through the center; a
    // multiple crossing here is a genuine 3-d obstruction
    for (std::size_t k = 0; k < D; ++k) {
      const double th =
          2 * kPi * static_cast<double>(k) / static_cast<double>(D);
      const std::size_t c =
          cross_section_crossings(s, center, {std::cos(th), std::sin(th)});
      rep.max_crossings = std::max(rep.max_crossings, c);
      if (c != 1) rep.star_shaped = false;
    }
  }

  // support function min over samples (meridian plane)
  const std::vector<Vec2> nrm = normals(s);
  rep.min_support = kInf;
  for (std::size_t i = 0; i < s.sample_count(); ++i) {
    const Vec2 d = s.pts[i] - (s.n >= 2 ? chalf : center);
    const double r = norm(d);
    if (r < 1e-12) continue;
    rep.min_support = std::min(rep.min_support, dot(nrm[i], d / r));
  }
  if (!std::isfinite(rep.min_support)) rep.min_support = 0;
  return rep;
}

// ---------------------------------------------------------------------------
// waiting time

double t_star(double diam, double R, int n) {
  if (!(R > 0) || !(diam >= 2 * R * (1 - 1e-12)))
    throw InvalidGeometry("t_star: need diam >= 2R > 0 (diam = " +
                          std::to_string(diam) + ", R = " + std::to_string(R) +
                          ")");
  return static_cast<double>(n) * std::log(diam / R);
}

double t_star(const ProfileSurface& s) {
  return t_star(diameter(s), inradius(s), s.n);
}

std::optional<double> first_star_time(const FlowTrajectory& traj) {
  if (traj.frames.empty()) return std::nullopt;
  const ProfileSurface& s0 = traj.frames.front().surface;
  const DiameterInfo di = diameter_info(s0);
  const Vec2 c = di.midpoint();
  const double rad = 0.5 * di.value;

  for (const FlowFrame& fr : traj.frames) {
    const ProfileSurface& s = fr.surface;
    double dmin = kInf;
    for (const Vec2& p : s.pts)
      dmin = std::min(dmin, point_sample_dist(c, p, s.n));
    if (dmin < rad - s.h) continue;  // not yet outside the ball
    bool star = false;
    try {
      star = is_star_shaped(s, c).star_shaped;
    } catch (const CenterOutside&) {
      star = false;
    }
    if (star) return fr.t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// gradient estimate

GradientAudit gradient_estimate_audit(const ProfileSurface& s, double Lambda,
                                      Vec2 center, double ball_radius) {
  if (!(ball_radius > 0) || Lambda < 0)
    throw InvalidParams("gradient_estimate_audit: bad Lambda/ball_radius");
  GradientAudit audit;
  audit.max_slack = -kInf;
  const std::size_t m = s.sample_count();
  const Vec2 c = s.n >= 2 ? Vec2{center.x, std::abs(center.y)} : center;

  std::vector<double> r(m), th(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 d = s.pts[i] - c;
    r[i] = norm(d);
    th[i] = std::atan2(d.y, d.x);
  }
  auto idx = [&](std::size_t i, std::ptrdiff_t off) {
    const auto sm = static_cast<std::ptrdiff_t>(m);
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + off;
    if (s.closed())
      j = (j % sm + sm) % sm;
    else
      j = std::clamp<std::ptrdiff_t>(j, 0, sm - 1);
    return static_cast<std::size_t>(j);
  };

  for (std::size_t i = 0; i < m; ++i) {
    if (r[i] <= ball_radius) continue;
    if (r[i] <= Lambda) {
      ++audit.skipped;
      continue;
    }
    // the audited portion must be a polar graph about the center
    const Vec2 dir = (s.pts[i] - c) / r[i];
    if (cross_section_crossings(s, c, dir) != 1)
      throw NotAGraph(
          "gradient_estimate_audit: multiple crossings toward sample " +
          std::to_string(i));
    const std::size_t ip = idx(i, +1), im = idx(i, -1);
    double dth = th[ip] - th[im];
    while (dth > kPi) dth -= 2 * kPi;
    while (dth < -kPi) dth += 2 * kPi;
    if (std::abs(dth) < 1e-12) continue;
    const double dr = (r[ip] - r[im]) / dth;
    const double bound =
        r[i] * Lambda / std::sqrt(r[i] * r[i] - Lambda * Lambda);
    audit.max_slack = std::max(audit.max_slack, std::abs(dr) - bound);
    ++audit.audited;
  }
  if (!audit.audited) audit.max_slack = 0;
  return audit;
}

// ---------------------------------------------------------------------------
// containment

ContainmentReport containment_monitor(const FlowTrajectory& traj,
                                      Vec2 inner_center, double R,
                                      Vec2 outer_center, double diam) {
  if (!(R > 0) || !(diam > 0))
    throw InvalidParams("containment_monitor: need R > 0 and diam > 0");
  ContainmentReport rep;
  const double escape_radius = diam * diam / (2 * R);
  const std::size_t nang = 512;

  for (const FlowFrame& fr : traj.frames) {
    const ProfileSurface& s = fr.surface;
    const int n = s.n;
    const double factor = std::exp(fr.t / static_cast<double>(n));
    ContainmentReport::Frame cf;
    cf.t = fr.t;

    // (a) B_{R e^{t/n}}(inner_center) inside the region: test the meridian
    // disk boundary (plus center) against the cross-section
    auto ball_slack = [&](Vec2 c, double rad) {
      double worst = 0;
      auto probe = [&](Vec2 q) {
        const Vec2 qh = {q.x, n >= 2 ? std::abs(q.y) : q.y};
        if (point_inside(s, qh)) return;
        worst = std::max(worst,
                         kernels::min_distance_point_polyline(qh, s.pts));
      };
      probe(c);
      for (std::size_t k = 0; k < nang; ++k) {
        const double a =
            2 * kPi * static_cast<double>(k) / static_cast<double>(nang);
        probe({c.x + rad * std::cos(a), c.y + rad * std::sin(a)});
      }
      return worst;
    };
    cf.inner_slack = ball_slack(inner_center, R * factor);
    cf.inner_ok = cf.inner_slack <= s.h;

    // (b) region inside B_{e^{t/n} diam/2}(outer_center)
    double dmax = 0;
    for (const Vec2& p : s.pts)
      dmax = std::max(dmax, point_sample_dist(outer_center, p, n));
    cf.outer_slack = std::max(0.0, dmax - factor * diam / 2);
    cf.outer_ok = cf.outer_slack <= s.h;

    // (c) escape deadline: first frame covering B_{diam^2/(2R)}
    if (!rep.escape_time && ball_slack(outer_center, escape_radius) <= s.h)
      rep.escape_time = fr.t;

    rep.max_inner_slack = std::max(rep.max_inner_slack, cf.inner_slack);
    rep.max_outer_slack = std::max(rep.max_outer_slack, cf.outer_slack);
    rep.frames.push_back(cf);
  }
  return rep;
}

}  // namespace imcf
