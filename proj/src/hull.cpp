#include "imcf/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/kernels.hpp"

namespace imcf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Two-ball geometry: surfaces at gap d, centers on the axis.
struct BallPair {
  double RL = 1, RR = 1, cL = 0, cR = 0;
  int n = 2;
};

BallPair make_pair(double R_left, double R_right, double d, int n) {
  if (!(R_left > 0) || !(R_right > 0) || !(d > 0) || n < 2)
    throw InvalidParams("minimal_bridge: need R > 0, d > 0, n >= 2");
  return {R_left, R_right, -(d / 2 + R_left), d / 2 + R_right, n};
}

struct OdeState {
  double f = 0, fp = 0;
};

// Minimal surface of revolution: f'' = (n - 1)(1 + f'^2) / f.
OdeState rk4_step(const OdeState& s, double h, int n) {
  auto rhs = [n](const OdeState& u) {
    return OdeState{u.fp, (n - 1) * (1 + u.fp * u.fp) / u.f};
  };
  const OdeState k1 = rhs(s);
  const OdeState k2 = rhs({s.f + 0.5 * h * k1.f, s.fp + 0.5 * h * k1.fp});
  const OdeState k3 = rhs({s.f + 0.5 * h * k2.f, s.fp + 0.5 * h * k2.fp});
  const OdeState k4 = rhs({s.f + h * k3.f, s.fp + h * k3.fp});
  return {s.f + h / 6 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f),
          s.fp + h / 6 * (k1.fp + 2 * k2.fp + 2 * k3.fp + k4.fp)};
}

OdeState left_attach(const BallPair& bp, double beta_l, double& x0) {
  x0 = bp.cL + bp.RL * std::cos(beta_l);
  return {bp.RL * std::sin(beta_l), -1.0 / std::tan(beta_l)};
}

// Integrates from the left tangency to x_end with fixed substeps.
OdeState integrate_to(const BallPair& bp, double beta_l, double x_end,
                      std::size_t substeps) {
  double x0;
  OdeState s = left_attach(bp, beta_l, x0);
  if (x_end <= x0) return s;
  const double h = (x_end - x0) / static_cast<double>(substeps);
  for (std::size_t i = 0; i < substeps; ++i) s = rk4_step(s, h, bp.n);
  return s;
}

// Clearance scan: integrates from the left tangency and returns the minimum
// of g(x) = f(x) - f_sphere_right(x) over the near-facing right quarter
// (x in [cR - RR, cR]). Positive = no touch, negative = penetration; a
// tangent bridge sits exactly at a zero of this minimum over beta_l.
struct ScanResult {
  double min_g = kInf;
  double x_at_min = 0;
  bool reached = false;  // entered the right-sphere domain
};

ScanResult clearance_scan(const BallPair& bp, double beta_l,
                          std::size_t substeps) {
  ScanResult out;
  double x;
  OdeState s = left_attach(bp, beta_l, x);
  const double x_end = bp.cR;
  if (x_end <= x) return out;
  const double h = (x_end - x) / static_cast<double>(substeps);
  const double f_cap = 2.5 * std::max(bp.RL, bp.RR);
  for (std::size_t i = 0; i < substeps; ++i) {
    s = rk4_step(s, h, bp.n);
    x += h;
    if (s.f > f_cap || std::abs(s.fp) > 1e8) break;
    const double dxr = x - bp.cR;
    if (dxr < -bp.RR) continue;
    out.reached = true;
    const double g = s.f - std::sqrt(std::max(0.0, bp.RR * bp.RR - dxr * dxr));
    if (g < out.min_g) {
      out.min_g = g;
      out.x_at_min = x;
    }
    if (g < -0.4 * bp.RR) break;  // deep penetration; sign is settled
  }
  return out;
}

// Damped Newton polish of the two-parameter tangency system
//   F1 = f(xR) - RR sin(beta_r),  F2 = f'(xR) - cot(beta_r),
// with xR = cR - RR cos(beta_r). Returns the polished latitudes.
std::array<double, 2> polish_tangency(const BallPair& bp, double beta_l,
                                      double beta_r, std::size_t substeps) {
  auto eval = [&](double bl, double br) {
    const double xr = bp.cR - bp.RR * std::cos(br);
    const OdeState s = integrate_to(bp, bl, xr, substeps);
    return std::array<double, 2>{s.f - bp.RR * std::sin(br),
                                 s.fp - 1.0 / std::tan(br)};
  };
  auto norm2 = [](const std::array<double, 2>& v) {
    return std::max(std::abs(v[0]), std::abs(v[1]));
  };
  std::array<double, 2> F = eval(beta_l, beta_r);
  for (int it = 0; it < 200; ++it) {
    if (norm2(F) < 1e-12) return {beta_l, beta_r};
    const double db = 1e-7;
    const std::array<double, 2> Fl = eval(beta_l + db, beta_r);
    const std::array<double, 2> Fr = eval(beta_l, beta_r + db);
    const double a11 = (Fl[0] - F[0]) / db, a12 = (Fr[0] - F[0]) / db;
    const double a21 = (Fl[1] - F[1]) / db, a22 = (Fr[1] - F[1]) / db;
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-30) break;
    const double sl = (-F[0] * a22 + F[1] * a12) / det;
    const double sr = (-F[1] * a11 + F[0] * a21) / det;
    double alpha = 1;
    bool ok = false;
    for (int half = 0; half < 25; ++half, alpha *= 0.5) {
      const double bl = beta_l + alpha * sl, br = beta_r + alpha * sr;
      if (bl <= 1e-6 || bl >= kPi / 2 || br <= 1e-6 || br >= kPi / 2) continue;
      const std::array<double, 2> Fn = eval(bl, br);
      if (norm2(Fn) < norm2(F)) {
        beta_l = bl;
        beta_r = br;
        F = Fn;
        ok = true;
        break;
      }
    }
    if (!ok) break;
  }
  if (norm2(F) > 1e-10)
    throw NoConvergence("minimal_bridge: tangency residual " +
                        std::to_string(norm2(F)) + " after damped Newton");
  return {beta_l, beta_r};
}

BridgeProfile build_bridge(const BallPair& bp, double beta_l, double beta_r,
                           std::size_t m) {
  BridgeProfile b;
  b.n = bp.n;
  b.attach_left = beta_l;
  b.attach_right = beta_r;
  b.x_left = bp.cL + bp.RL * std::cos(beta_l);
  b.x_right = bp.cR - bp.RR * std::cos(beta_r);

  const double span = b.x_right - b.x_left;
  const std::size_t sub = 16;
  double x;
  OdeState s = left_attach(bp, beta_l, x);
  b.f.reserve(m + 1);
  b.f.push_back({x, s.f});
  const double dx = span / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double h = dx / static_cast<double>(sub);
    for (std::size_t k = 0; k < sub; ++k) s = rk4_step(s, h, bp.n);
    x = b.x_left + static_cast<double>(i + 1) * dx;
    b.f.push_back({x, s.f});
  }

  if (bp.n == 2) {
    // catenoid closed form fitted at the right tangency
    const double fp = 1.0 / std::tan(beta_r);
    b.c = bp.RR * std::sin(beta_r) * std::sin(beta_r);
    b.b = b.x_right - b.c * std::asinh(fp);
  }

  // minimality residual from 5-point stencils on the uniform samples
  double worst = 0;
  for (std::size_t i = 2; i + 2 < b.f.size(); ++i) {
    const double fm2 = b.f[i - 2].y, fm1 = b.f[i - 1].y, f0 = b.f[i].y,
                 fp1 = b.f[i + 1].y, fp2 = b.f[i + 2].y;
    const double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * dx);
    const double d2 =
        (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * dx * dx);
    const double w = 1 + d1 * d1;
    const double H = -d2 / (w * std::sqrt(w)) +
                     (bp.n - 1) / (f0 * std::sqrt(w));
    worst = std::max(worst, std::abs(H));
  }
  b.max_interior_H = worst;
  return b;
}

// All tangent bridges, ordered by increasing attach_left: grid scan of the
// clearance minimum over the left latitude, bisection of each sign change,
// then the two-parameter polish.
std::vector<BridgeProfile> tangent_bridges(const BallPair& bp,
                                           std::size_t m) {
  const std::size_t grid = 640;
  const std::size_t scan_sub = 4096, fine_sub = 32768;
  const double blo = 0.008, bhi = kPi / 2 - 0.004;
  std::vector<BridgeProfile> out;

  double prev_beta = blo;
  ScanResult prev = clearance_scan(bp, blo, scan_sub);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double beta = blo + (bhi - blo) * static_cast<double>(k) /
                                  static_cast<double>(grid);
    const ScanResult cur = clearance_scan(bp, beta, scan_sub);
    const bool sign_change = prev.reached && cur.reached &&
                             (prev.min_g < 0) != (cur.min_g < 0);
    if (sign_change) {
      double lo = prev_beta, hi = beta;
      bool lo_neg = prev.min_g < 0;
      double x_touch = cur.x_at_min;
      for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const ScanResult ms = clearance_scan(bp, mid, scan_sub);
        x_touch = ms.x_at_min;
        if ((ms.min_g < 0) == lo_neg)
          lo = mid;
        else
          hi = mid;
      }
      const double beta_l = 0.5 * (lo + hi);
      const double cosr =
          std::clamp((bp.cR - x_touch) / bp.RR, 1e-9, 1.0 - 1e-12);
      const auto betas =
          polish_tangency(bp, beta_l, std::acos(cosr), fine_sub);
      out.push_back(build_bridge(bp, betas[0], betas[1], m));
    }
    prev = cur;
    prev_beta = beta;
  }
  return out;
}

// Hull area of the cap + bridge candidate for equal balls (n = 2 closed
// forms): kept spherical zones past the tangency latitudes plus the catenoid
// band area pi c^2 (u + sinh u cosh u) between the attach parameters.
double candidate_hull_area(double R, const BridgeProfile& b) {
  const double capL = 2 * kPi * R * R * (1 + std::cos(b.attach_left));
  const double capR = 2 * kPi * R * R * (1 + std::cos(b.attach_right));
  auto band = [&](double u) { return u + std::sinh(u) * std::cosh(u); };
  const double uL = (b.x_left - b.b) / b.c, uR = (b.x_right - b.b) / b.c;
  return capL + capR + kPi * b.c * b.c * (band(uR) - band(uL));
}

}  // namespace

std::optional<BridgeProfile> minimal_bridge(double R_left, double R_right,
                                            double d, int n, std::size_t m) {
  const BallPair bp = make_pair(R_left, R_right, d, n);
  std::vector<BridgeProfile> roots = tangent_bridges(bp, m);
  if (roots.empty()) return std::nullopt;
  // the larger-waist (larger attach latitude) catenoid is the stable,
  // smaller-area branch; roots are ordered by attach_left
  return roots.back();
}

HullResult hull_two_balls(double R, double d, int n, std::size_t m) {
  if (n != 2)
    throw InvalidParams("hull_two_balls: implemented for n = 2 only");
  const BallPair bp = make_pair(R, R, d, n);
  HullResult res;
  res.body_area = 2 * 4 * kPi * R * R;
  const double tol_area = 1e-6 * res.body_area;

  std::vector<BridgeProfile> roots = tangent_bridges(bp, m);
  if (roots.empty()) {
    // no tangent bridge: the candidate hull is the balls themselves, and a
    // single ball is strictly outward minimizing
    res.hull_area = res.body_area;
    res.margin = 0;
    res.is_outward_minimizing = true;
    res.is_strictly = true;
    return res;
  }

  double best = kInf;
  std::size_t pick = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double a = candidate_hull_area(R, roots[i]);
    if (a < best) {
      best = a;
      pick = i;
    }
  }
  res.hull_area = best;
  res.margin = res.hull_area - res.body_area;
  res.is_outward_minimizing = res.margin >= -tol_area;
  res.is_strictly = res.margin > tol_area;
  res.bridge = std::move(roots[pick]);

  const double p1 = R + d / 2;
  res.extent_ok = res.bridge->x_left >= -p1 - 1e-12 &&
                  res.bridge->x_right <= p1 + 1e-12;
  double fmax = 0;
  for (const Vec2& q : res.bridge->f) fmax = std::max(fmax, q.y);
  res.cylinder_ok = fmax <= R * (1 + 1e-12);
  return res;
}

double margin_threshold(double R, int n, double d_lo, double d_hi,
                        double tol) {
  if (!(d_lo > 0) || !(d_hi > d_lo) || !(tol > 0))
    throw InvalidParams("margin_threshold: bad bracket");
  double lo = d_lo, hi = d_hi;
  double mlo = hull_two_balls(R, lo, n, 512).margin;
  double mhi = hull_two_balls(R, hi, n, 512).margin;
  if (!(mlo < 0) || mhi < 0)
    throw InvalidParams("margin_threshold: margin does not change sign on [" +
                        std::to_string(d_lo) + ", " + std::to_string(d_hi) +
                        "]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (hull_two_balls(R, mid, n, 512).margin < 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

HullResult audit_dumbbell_hull(const DumbbellSpec& spec) {
  const ProfileSurface body = build_dumbbell(spec);
  const NeckAssembly neck = assemble_neck(spec);
  HullResult res = hull_two_balls(spec.R, spec.d, 2, spec.m);
  if (!res.bridge)
    throw PreconditionViolated(
        "audit_dumbbell_hull: the two-ball hull has no bridge; nothing to "
        "certify (increase d sensitivity or reduce d)");
  const BridgeProfile& bridge = *res.bridge;

  // the dumbbell must clear the H = 0 bridge strictly; beyond the modified
  // zone it coincides with the balls, whose tangency contact is legitimate
  const double x_zone = neck.x_junction + spec.eps_I_II + body.h;
  std::vector<Vec2> modified;
  for (const Vec2& p : body.pts)
    if (std::abs(p.x) <= x_zone) modified.push_back(p);
  double clearance = kInf;
  if (!modified.empty())
    clearance = kernels::min_distance_polylines(modified, bridge.f) - body.h;
  res.clearance = clearance;
  if (!(clearance > 0))
    throw HullTouched("audit_dumbbell_hull: modified zone within " +
                      std::to_string(clearance + body.h) +
                      " of the bridge (<= h = " + std::to_string(body.h) +
                      ")");

  // comparison body: dumbbell plus the region under the bridge. Its boundary
  // is the dumbbell outside the bridge span plus the catenoid itself.
  const double body_area = area(body);
  double part = 0;  // dumbbell area inside the bridge span
  for (std::size_t i = 0; i + 1 < body.pts.size(); ++i) {
    const Vec2 a = body.pts[i], b = body.pts[i + 1];
    if (std::abs(0.5 * (a.x + b.x)) > bridge.x_right) continue;
    part += 2 * kPi * 0.5 * (a.y + b.y) * dist(a, b);
  }
  double band = 0;
  for (std::size_t i = 0; i + 1 < bridge.f.size(); ++i) {
    const Vec2 a = bridge.f[i], b = bridge.f[i + 1];
    band += 2 * kPi * 0.5 * (a.y + b.y) * dist(a, b);
  }

  res.body_area = body_area;
  res.hull_area = body_area - part + band;
  res.margin = res.hull_area - res.body_area;
  const double tol_area = 1e-6 * res.body_area;
  res.is_outward_minimizing = res.margin >= -tol_area;
  res.is_strictly = res.margin > tol_area;
  return res;
}

bool convex_certificate(const ProfileSurface& s) {
  const std::size_t m = s.sample_count();
  if (m < 3) return false;
  const double d = diameter(s);
  const double tol = 1e-12 * d * d;
  if (s.n <= 1) {
    // CCW loop: convex iff no right turn
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2 a = s.pts[i % m], b = s.pts[(i + 1) % m],
                 c = s.pts[(i + 2) % m];
      if (cross(b - a, c - b) < -tol) return false;
    }
    return true;
  }
  if (s.closed()) return false;  // revolved closed loop: a solid torus
  // anchored profile left -> right over the top: the revolved body is convex
  // iff f is concave, i.e. the polyline only turns clockwise
  for (std::size_t i = 0; i + 2 < s.pts.size(); ++i) {
    const Vec2 a = s.pts[i], b = s.pts[i + 1], c = s.pts[i + 2];
    if (cross(b - a, c - b) > tol) return false;
  }
  return true;
}

}  // namespace imcf
