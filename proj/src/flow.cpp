#include "imcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "imcf/errors.hpp"
#include "imcf/kernels.hpp"

namespace imcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_segment(const ProfileSurface& s) {
  double m = kInf;
  for (std::size_t i = 0; i + 1 < s.pts.size(); ++i)
    m = std::min(m, dist(s.pts[i], s.pts[i + 1]));
  return m;
}

// Normal velocity nu / H at every sample; anchored endpoints move along the
// axis only.
std::vector<Vec2> velocities(const ProfileSurface& s,
                             const std::vector<double>& H) {
  const std::vector<Vec2> nu = normals(s);
  std::vector<Vec2> v(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) v[i] = nu[i] / H[i];
  if (!s.closed()) {
    v.front().y = 0;
    v.back().y = 0;
  }
  return v;
}

void advance(ProfileSurface& s, const std::vector<Vec2>& v, double dt) {
  const std::size_t m = s.sample_count();
  for (std::size_t i = 0; i < m; ++i) s.pts[i] = s.pts[i] + dt * v[i];
  if (s.closed())
    s.pts.back() = s.pts.front();
  else {
    s.pts.front().y = 0;
    s.pts.back().y = 0;
  }
}

FrameDiagnostics diagnose(const ProfileSurface& s) {
  FrameDiagnostics d;
  const std::vector<double> H = mean_curvature(s);
  const auto [lo, hi] = std::minmax_element(H.begin(), H.end());
  d.min_H = *lo;
  d.max_H = *hi;
  d.area = area(s);
  d.embedded = !self_intersects(s).has_value();
  return d;
}

}  // namespace

std::string to_string(FlowEventKind kind) {
  switch (kind) {
    case FlowEventKind::Completed:
      return "completed";
    case FlowEventKind::SingularityDetected:
      return "singularity_detected";
    case FlowEventKind::SelfIntersection:
      return "self_intersection";
    case FlowEventKind::StoppedMaxSteps:
      return "stopped_max_steps";
  }
  return "unknown";
}

double stable_dt(const ProfileSurface& s, double cfl) {
  if (!(cfl > 0) || !(cfl <= 0.5))
    throw InvalidParams("stable_dt: cfl must lie in (0, 0.5]");
  const std::vector<double> H = mean_curvature(s);
  const double minH = *std::min_element(H.begin(), H.end());
  if (!(minH > 0)) return 0;
  const double h = min_segment(s);
  return cfl * h * h * std::min(minH, minH * minH);
}

ProfileSurface step(const ProfileSurface& s, double dt, bool rk2) {
  if (!(dt > 0) || !std::isfinite(dt))
    throw InvalidParams("step: dt must be positive and finite");
  const std::vector<double> H = mean_curvature(s);
  const double minH = *std::min_element(H.begin(), H.end());
  const double h = min_segment(s);
  if (dt > 0.5 * h * h * minH)
    throw StabilityViolation("step: dt = " + std::to_string(dt) +
                             " exceeds 0.5 h_min^2 min H = " +
                             std::to_string(0.5 * h * h * minH));

  const std::vector<Vec2> v1 = velocities(s, H);
  ProfileSurface s1 = s;
  advance(s1, v1, dt);
  if (!rk2) return s1;

  const std::vector<double> H1 = mean_curvature(s1);
  if (*std::min_element(H1.begin(), H1.end()) <= 0) return s1;  // Euler only
  const std::vector<Vec2> v2 = velocities(s1, H1);
  ProfileSurface out = s;
  std::vector<Vec2> vb(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) vb[i] = 0.5 * (v1[i] + v2[i]);
  advance(out, vb, dt);
  return out;
}

FlowTrajectory run(const ProfileSurface& s_in, const FlowConfig& cfg) {
  if (!(cfg.t_end > 0) || !(cfg.cfl > 0 && cfg.cfl <= 0.5) ||
      !(cfg.record_every > 0))
    throw InvalidParams("run: need t_end > 0, cfl in (0, 0.5], record_every > 0");

  ProfileSurface s = s_in;
  normalize_orientation(s);
  if (cfg.m) s = resample_arclength(s, cfg.m);
  const std::size_t m_work = s.sample_count();

  const std::vector<double> H0 = mean_curvature(s);
  const double minH0 = *std::min_element(H0.begin(), H0.end());
  if (!(minH0 > 0))
    throw NotMeanConvex("run: initial min H = " + std::to_string(minH0));
  const double eps_H = cfg.eps_H > 0 ? cfg.eps_H : 1e-3 * minH0;
  const double kap_max =
      cfg.kappa_max > 0 ? cfg.kappa_max : 1e4 / diameter(s);

  FlowTrajectory traj;
  double t = 0;
  auto record = [&](const ProfileSurface& cur) {
    if (!traj.frames.empty() && traj.frames.back().t >= t - 1e-15) return;
    traj.frames.push_back({t, cur, diagnose(cur)});
  };
  traj.frames.push_back({0, s, diagnose(s)});
  double next_record = cfg.record_every;

  FlowEvent ev;
  ev.kind = FlowEventKind::Completed;
  std::size_t steps = 0;
  while (t < cfg.t_end) {
    if (steps >= cfg.max_steps) {
      ev.kind = FlowEventKind::StoppedMaxSteps;
      ev.detail = "max_steps reached";
      break;
    }
    const std::vector<double> H = mean_curvature(s);
    const auto minH_it = std::min_element(H.begin(), H.end());
    const double minH = *minH_it;
    if (minH <= eps_H) {
      ev.kind = FlowEventKind::SingularityDetected;
      const std::size_t i =
          static_cast<std::size_t>(minH_it - H.begin());
      ev.detail = "min H = " + std::to_string(minH) + " <= eps_H = " +
                  std::to_string(eps_H) + " at sample " + std::to_string(i) +
                  " (x = " + std::to_string(s.pts[i].x) + ", f = " +
                  std::to_string(s.pts[i].y) + ")";
      break;
    }
    const std::vector<double> kap = profile_curvature(s);
    double maxk = 0;
    std::size_t maxk_i = 0;
    for (std::size_t i = 0; i < kap.size(); ++i)
      if (std::abs(kap[i]) > maxk) {
        maxk = std::abs(kap[i]);
        maxk_i = i;
      }
    if (maxk >= kap_max) {
      ev.kind = FlowEventKind::SingularityDetected;
      ev.detail = "curvature " + std::to_string(maxk) + " >= kappa_max = " +
                  std::to_string(kap_max) + " at sample " +
                  std::to_string(maxk_i);
      break;
    }
    if (cfg.check_self_intersection) {
      if (auto hit = self_intersects(s)) {
        ev.kind = FlowEventKind::SelfIntersection;
        ev.detail = hit->kind == IntersectionKind::AxisCrossing
                        ? "profile touched the rotation axis"
                        : "profile within 0.25 h of itself (segments " +
                              std::to_string(hit->seg_a) + ", " +
                              std::to_string(hit->seg_b) + ")";
        ev.intersection = *hit;
        break;
      }
    }

    const double h = min_segment(s);
    double dt = cfg.cfl * h * h * std::min(minH, minH * minH);
    dt = std::min(dt, 0.5 * h * minH);  // max displacement <= h/2
    dt = std::min(dt, cfg.t_end - t);
    s = step(s, dt, cfg.rk2);
    t += dt;
    ++steps;
    if (cfg.resample_every > 0 &&
        steps % static_cast<std::size_t>(cfg.resample_every) == 0)
      s = resample_arclength(s, m_work);
    if (t + 1e-15 >= next_record) {
      record(s);
      while (next_record <= t + 1e-15) next_record += cfg.record_every;
    }
  }
  ev.t_event = t;
  record(s);
  traj.event = ev;
  return traj;
}

// ---------------------------------------------------------------------------
// radial scalar scheme

FlowTrajectory run_radial_graph(const RadialGraph& g0, const FlowConfig& cfg) {
  if (!(cfg.t_end > 0) || !(cfg.cfl > 0 && cfg.cfl <= 0.5) ||
      !(cfg.record_every > 0))
    throw InvalidParams("run_radial_graph: bad config");
  if (g0.r.size() < 8)
    throw InvalidParams("run_radial_graph: need at least 8 samples");
  for (double r : g0.r)
    if (!(r > 0) || !std::isfinite(r))
      throw LostStarShape("run_radial_graph: nonpositive initial radius");

  RadialGraph g = g0;
  const std::size_t M = g.r.size();
  const double dlt = g.grid_step();

  // speed v/H of dr/dt with v = sqrt(r^2 + r'^2)/r; throws LostStarShape on
  // r <= 0 or H <= 0
  auto rates = [&](const std::vector<double>& r, double& minH) {
    std::vector<double> dr(M);
    minH = kInf;
    for (std::size_t i = 0; i < M; ++i) {
      if (!(r[i] > 0))
        throw LostStarShape("run_radial_graph: radius hit zero at node " +
                            std::to_string(i));
      double rp, rpp;
      if (g.n == 1) {
        const std::size_t ip = (i + 1) % M, im = (i + M - 1) % M;
        rp = (r[ip] - r[im]) / (2 * dlt);
        rpp = (r[ip] - 2 * r[i] + r[im]) / (dlt * dlt);
      } else if (i == 0 || i + 1 == M) {  // poles: reflective colatitude
        const std::size_t nb = (i == 0) ? 1 : M - 2;
        rp = 0;
        rpp = 2 * (r[nb] - r[i]) / (dlt * dlt);
      } else {
        rp = (r[i + 1] - r[i - 1]) / (2 * dlt);
        rpp = (r[i + 1] - 2 * r[i] + r[i - 1]) / (dlt * dlt);
      }
      const double w = r[i] * r[i] + rp * rp;
      double H;
      if (g.n == 1) {
        H = (w + rp * rp - r[i] * rpp) / (w * std::sqrt(w));
      } else if (i == 0 || i + 1 == M) {
        H = 2 * (r[i] - rpp) / (r[i] * r[i]);
      } else {
        const double phi = dlt * static_cast<double>(i);
        const double k1 = (w + rp * rp - r[i] * rpp) / (w * std::sqrt(w));
        const double k2 =
            (r[i] - rp / std::tan(phi)) / (r[i] * std::sqrt(w));
        H = k1 + k2;
      }
      if (!(H > 0))
        throw LostStarShape("run_radial_graph: H = " + std::to_string(H) +
                            " at node " + std::to_string(i));
      minH = std::min(minH, H);
      dr[i] = std::sqrt(w) / (r[i] * H);
    }
    return dr;
  };

  FlowTrajectory traj;
  double t = 0;
  auto record = [&]() {
    if (!traj.frames.empty() && traj.frames.back().t >= t - 1e-15) return;
    ProfileSurface s = from_radial_graph(g);
    traj.frames.push_back({t, s, diagnose(s)});
  };
  {
    ProfileSurface s = from_radial_graph(g);
    traj.frames.push_back({0, s, diagnose(s)});
  }
  double next_record = cfg.record_every;

  FlowEvent ev;
  ev.kind = FlowEventKind::Completed;
  std::size_t steps = 0;
  while (t < cfg.t_end) {
    if (steps >= cfg.max_steps) {
      ev.kind = FlowEventKind::StoppedMaxSteps;
      ev.detail = "max_steps reached";
      break;
    }
    double minH = 0;
    const std::vector<double> k1 = rates(g.r, minH);
    const double rmin = *std::min_element(g.r.begin(), g.r.end());
    const double h = dlt * rmin;
    double dt = cfg.cfl * h * h * std::min(minH, minH * minH);
    dt = std::min(dt, cfg.t_end - t);

    std::vector<double> r1 = g.r;
    for (std::size_t i = 0; i < M; ++i) r1[i] += dt * k1[i];
    if (cfg.rk2) {
      double minH1 = 0;
      const std::vector<double> k2 = rates(r1, minH1);
      for (std::size_t i = 0; i < M; ++i)
        r1[i] = g.r[i] + 0.5 * dt * (k1[i] + k2[i]);
    }
    g.r = std::move(r1);
    t += dt;
    ++steps;
    if (t + 1e-15 >= next_record) {
      record();
      while (next_record <= t + 1e-15) next_record += cfg.record_every;
    }
  }
  ev.t_event = t;
  record();
  traj.event = ev;
  return traj;
}

// ---------------------------------------------------------------------------
// arrival time / level-set residual

namespace {

struct CommonGrid {
  double x0 = 0, y0 = 0, dx = 0, dy = 0;
  std::size_t nx = 0, ny = 0;
  Vec2 center(std::size_t i, std::size_t j) const {
    return {x0 + (static_cast<double>(i) + 0.5) * dx,
            y0 + (static_cast<double>(j) + 0.5) * dy};
  }
};

// Scanline parity rasterization of the region bounded by the profile (and
// the axis chord for anchored profiles) onto the shared cell-center grid.
std::vector<unsigned char> raster_frame(const ProfileSurface& s,
                                        const CommonGrid& gd) {
  std::vector<unsigned char> in(gd.nx * gd.ny, 0);
  std::vector<Vec2> poly(s.pts.begin(), s.pts.end());
  if (!poly.empty() && s.closed()) poly.pop_back();
  std::vector<double> xs;
  for (std::size_t j = 0; j < gd.ny; ++j) {
    const double y = gd.y0 + (static_cast<double>(j) + 0.5) * gd.dy;
    xs.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 a = poly[k];
      const Vec2 b = poly[(k + 1) % poly.size()];
      if ((a.y > y) != (b.y > y))
        xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t p = 0; p + 1 < xs.size(); p += 2) {
      const double lo = xs[p], hi = xs[p + 1];
      auto first = static_cast<std::ptrdiff_t>(
          std::ceil((lo - gd.x0) / gd.dx - 0.5));
      auto last = static_cast<std::ptrdiff_t>(
          std::floor((hi - gd.x0) / gd.dx - 0.5));
      first = std::max<std::ptrdiff_t>(first, 0);
      last = std::min<std::ptrdiff_t>(last,
                                      static_cast<std::ptrdiff_t>(gd.nx) - 1);
      for (std::ptrdiff_t i = first; i <= last; ++i)
        in[j * gd.nx + static_cast<std::size_t>(i)] = 1;
    }
  }
  return in;
}

// Nesting check: every sample of frame k must lie in frame k+1's region up
// to penetration 0.5 h.
void check_nesting(const FlowTrajectory& traj) {
  for (std::size_t k = 0; k + 1 < traj.frames.size(); ++k) {
    const ProfileSurface& a = traj.frames[k].surface;
    const ProfileSurface& b = traj.frames[k + 1].surface;
    for (const Vec2& p : a.pts) {
      Vec2 q = {p.x, std::abs(p.y)};
      if (point_inside(b, q)) continue;
      const double pen = kernels::min_distance_point_polyline(q, b.pts);
      if (pen > 0.5 * b.h)
        throw NotFoliated(
            "arrival_time_residual: frames at t = " +
            std::to_string(traj.frames[k].t) + " and t = " +
            std::to_string(traj.frames[k + 1].t) + " do not nest");
    }
  }
}

// Arrival times on the annulus swept between first and last frame; NaN
// where undefined.
std::vector<double> arrival_field(const FlowTrajectory& traj,
                                  const CommonGrid& gd) {
  check_nesting(traj);
  const std::size_t K = traj.frames.size();
  std::vector<std::vector<unsigned char>> masks(K);
  for (std::size_t k = 0; k < K; ++k)
    masks[k] = raster_frame(traj.frames[k].surface, gd);

  std::vector<double> u(gd.nx * gd.ny,
                        std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < gd.ny; ++j) {
    for (std::size_t i = 0; i < gd.nx; ++i) {
      const std::size_t c = j * gd.nx + i;
      if (masks[0][c] || !masks[K - 1][c]) continue;
      std::size_t k = 0;
      while (k + 1 < K && !masks[k + 1][c]) ++k;
      if (k + 1 >= K) continue;
      const Vec2 p = gd.center(i, j);
      const double dk = kernels::min_distance_point_polyline(
          p, traj.frames[k].surface.pts);
      const double dk1 = kernels::min_distance_point_polyline(
          p, traj.frames[k + 1].surface.pts);
      const double t0 = traj.frames[k].t, t1 = traj.frames[k + 1].t;
      u[c] = t0 + (t1 - t0) * dk / std::max(dk + dk1, 1e-300);
    }
  }
  return u;
}

ResidualStats residual_of_field(const std::vector<double>& u,
                                const CommonGrid& gd, int n) {
  const std::size_t nx = gd.nx, ny = gd.ny;
  auto at = [&](std::size_t i, std::size_t j) { return u[j * nx + i]; };
  // unit gradient field where u and its 4 neighbors are defined
  std::vector<double> w1(nx * ny, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> w2 = w1, gnorm = w1;
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double c = at(i, j), xe = at(i + 1, j), xw = at(i - 1, j),
                   yn = at(i, j + 1), ys = at(i, j - 1);
      if (std::isnan(c) || std::isnan(xe) || std::isnan(xw) ||
          std::isnan(yn) || std::isnan(ys))
        continue;
      const double px = (xe - xw) / (2 * gd.dx);
      const double py = (yn - ys) / (2 * gd.dy);
      const double gn = std::hypot(px, py);
      if (gn < 1e-12) continue;
      w1[j * nx + i] = px / gn;
      w2[j * nx + i] = py / gn;
      gnorm[j * nx + i] = gn;
    }
  }
  ResidualStats st;
  double sum = 0;
  for (std::size_t j = 2; j + 2 < ny; ++j) {
    for (std::size_t i = 2; i + 2 < nx; ++i) {
      const std::size_t c = j * nx + i;
      if (std::isnan(gnorm[c]) || std::isnan(w1[c + 1]) ||
          std::isnan(w1[c - 1]) || std::isnan(w2[c + nx]) ||
          std::isnan(w2[c - nx]))
        continue;
      double div = (w1[c + 1] - w1[c - 1]) / (2 * gd.dx) +
                   (w2[c + nx] - w2[c - nx]) / (2 * gd.dy);
      if (n >= 2) {
        const double y = gd.y0 + (static_cast<double>(j) + 0.5) * gd.dy;
        div += w2[c] / y;
      }
      const double res = std::abs(div - gnorm[c]);
      st.max_residual = std::max(st.max_residual, res);
      sum += res;
      ++st.cells;
    }
  }
  st.mean_residual = st.cells ? sum / static_cast<double>(st.cells) : 0;
  return st;
}

CommonGrid make_grid(const std::vector<const FlowTrajectory*>& trajs,
                     std::size_t grid) {
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  int n = 1;
  for (const FlowTrajectory* tr : trajs) {
    const ProfileSurface& last = tr->frames.back().surface;
    n = last.n;
    for (const Vec2& p : last.pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  CommonGrid gd;
  if (n >= 2) ymin = 0;
  const double padx = 0.02 * (xmax - xmin), pady = 0.02 * (ymax - ymin);
  gd.x0 = xmin - padx;
  gd.y0 = (n >= 2) ? 0.0 : ymin - pady;
  gd.nx = grid;
  gd.ny = grid;
  gd.dx = (xmax - xmin + 2 * padx) / static_cast<double>(grid);
  gd.dy = ((ymax + pady) - gd.y0) / static_cast<double>(grid);
  return gd;
}

}  // namespace

ResidualStats arrival_time_residual(const FlowTrajectory& traj,
                                    std::size_t grid) {
  return arrival_time_residual(std::vector<const FlowTrajectory*>{&traj},
                               grid);
}

ResidualStats arrival_time_residual(
    const std::vector<const FlowTrajectory*>& trajs, std::size_t grid) {
  if (trajs.empty()) throw InvalidParams("arrival_time_residual: no input");
  for (const FlowTrajectory* tr : trajs)
    if (!tr || tr->frames.size() < 2)
      throw InvalidParams("arrival_time_residual: need at least two frames");
  const CommonGrid gd = make_grid(trajs, grid);

  std::vector<double> u(gd.nx * gd.ny,
                        std::numeric_limits<double>::quiet_NaN());
  for (const FlowTrajectory* tr : trajs) {
    const std::vector<double> uk = arrival_field(*tr, gd);
    for (std::size_t c = 0; c < u.size(); ++c) {
      if (std::isnan(uk[c])) continue;
      if (!std::isnan(u[c]))
        throw NotFoliated(
            "arrival_time_residual: two trajectories sweep a common cell");
      u[c] = uk[c];
    }
  }
  ResidualStats st = residual_of_field(u, gd, trajs.front()->frames.back()
                                                  .surface.n);
  st.t_first = trajs.front()->frames.front().t;
  st.t_last = trajs.front()->frames.back().t;
  return st;
}

// ---------------------------------------------------------------------------
// avoidance

AvoidanceReport avoidance_check(const FlowTrajectory& outer,
                                const FlowTrajectory& inner) {
  if (outer.frames.empty() || inner.frames.empty())
    throw PreconditionViolated("avoidance_check: empty trajectory");
  const ProfileSurface& O0 = outer.frames.front().surface;
  const ProfileSurface& I0 = inner.frames.front().surface;
  for (const Vec2& p : I0.pts)
    if (!point_inside(O0, {p.x, std::abs(p.y)}))
      throw PreconditionViolated(
          "avoidance_check: inner surface not inside outer at t = 0");
  if (kernels::min_distance_polylines(O0.pts, I0.pts) <= 0)
    throw PreconditionViolated(
        "avoidance_check: surfaces touch at t = 0");

  AvoidanceReport rep;
  const std::size_t K =
      std::min(outer.frames.size(), inner.frames.size());
  rep.entries.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const ProfileSurface& O = outer.frames[k].surface;
    const ProfileSurface& I = inner.frames[k].surface;
    AvoidanceReport::Entry e;
    e.t = outer.frames[k].t;
    const double d = kernels::min_distance_polylines(O.pts, I.pts);
    e.ell = d * d;
    e.contained = true;
    for (const Vec2& p : I.pts)
      if (!point_inside(O, {p.x, std::abs(p.y)})) {
        e.contained = false;
        break;
      }
    rep.contained_all = rep.contained_all && e.contained;
    rep.entries.push_back(e);
  }
  rep.min_increment = kInf;
  for (std::size_t k = 0; k + 1 < rep.entries.size(); ++k)
    rep.min_increment =
        std::min(rep.min_increment, rep.entries[k + 1].ell - rep.entries[k].ell);
  if (rep.entries.size() < 2) rep.min_increment = 0;
  return rep;
}

}  // namespace imcf
