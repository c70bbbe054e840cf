#include "imcf/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "imcf/diagnostics.hpp"
#include "imcf/errors.hpp"
#include "imcf/hull.hpp"

namespace imcf {
namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParams(msg);
}

void set_step(ProfileSurface& s) {
  s.h = total_length(s) / static_cast<double>(s.segment_count());
}

}  // namespace

// ---------------------------------------------------------------------------
// quintic glue

QuinticCoeffs quintic_c2_coefficients(double g, double g_d1, double g_d2,
                                      double eps) {
  if (!(eps > 0) || !std::isfinite(eps))
    throw DegenerateInterval("quintic_c2_coefficients: eps must be > 0, got " +
                             std::to_string(eps));
  const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps, e5 = e4 * eps;
  QuinticCoeffs q;
  q.eps = eps;
  q.A = 10 * g / e3 - 4 * g_d1 / e2 + g_d2 / (2 * eps);
  q.B = -15 * g / e4 + 7 * g_d1 / e3 - g_d2 / e2;
  q.C = 6 * g / e5 - 3 * g_d1 / e4 + g_d2 / (2 * e3);
  return q;
}

double quintic_matrix_det(double eps) {
  if (!(eps > 0) || !std::isfinite(eps))
    throw DegenerateInterval("quintic_matrix_det: eps must be > 0");
  return 2 * std::pow(eps, 9);
}

// ---------------------------------------------------------------------------
// analytic fixtures

ProfileSurface build_circle(double R, std::size_t m, Vec2 center) {
  require(R > 0 && std::isfinite(R), "build_circle: R must be positive");
  require(m >= 8, "build_circle: need at least 8 samples");
  ProfileSurface s;
  s.n = 1;
  s.topology = Topology::ClosedLoop;
  s.pts.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double th = 2 * kPi * static_cast<double>(i) / static_cast<double>(m);
    s.pts.push_back({center.x + R * std::cos(th), center.y + R * std::sin(th)});
  }
  s.pts.push_back(s.pts.front());
  set_step(s);
  return s;
}

ProfileSurface build_sphere(double R, std::size_t m, double center_x) {
  require(R > 0 && std::isfinite(R), "build_sphere: R must be positive");
  require(m >= 8, "build_sphere: need at least 8 samples");
  ProfileSurface s;
  s.n = 2;
  s.topology = Topology::AxisAnchored;
  s.pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double phi =
        kPi * static_cast<double>(i) / static_cast<double>(m - 1);
    s.pts.push_back({center_x - R * std::cos(phi), R * std::sin(phi)});
  }
  s.pts.front().y = 0;
  s.pts.back().y = 0;
  set_step(s);
  return s;
}

ProfileSurface build_ellipse(double a, double b, int n, std::size_t m) {
  require(a > 0 && b > 0, "build_ellipse: semi-axes must be positive");
  require(n == 1 || n == 2, "build_ellipse: n must be 1 or 2");
  require(m >= 8, "build_ellipse: need at least 8 samples");
  ProfileSurface s;
  s.n = n;
  if (n == 1) {
    s.topology = Topology::ClosedLoop;
    s.pts.reserve(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const double th =
          2 * kPi * static_cast<double>(i) / static_cast<double>(m);
      s.pts.push_back({a * std::cos(th), b * std::sin(th)});
    }
    s.pts.push_back(s.pts.front());
  } else {
    s.topology = Topology::AxisAnchored;
    s.pts.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double phi =
          kPi * static_cast<double>(i) / static_cast<double>(m - 1);
      s.pts.push_back({-a * std::cos(phi), b * std::sin(phi)});
    }
    s.pts.front().y = 0;
    s.pts.back().y = 0;
  }
  set_step(s);
  return s;
}

ProfileSurface build_torus(double a, double b, std::size_t m) {
  require(a > b && b > 0, "build_torus: need a > b > 0");
  require(m >= 8, "build_torus: need at least 8 samples");
  ProfileSurface s;
  s.n = 2;
  s.topology = Topology::ClosedLoop;
  s.pts.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double th = 2 * kPi * static_cast<double>(i) / static_cast<double>(m);
    s.pts.push_back({b * std::cos(th), a + b * std::sin(th)});
  }
  s.pts.push_back(s.pts.front());
  set_step(s);
  return s;
}

ProfileSurface build_capsule(double r, double L, std::size_t m) {
  require(r > 0 && L > 0, "build_capsule: need r > 0 and L > 0");
  require(m >= 16, "build_capsule: need at least 16 samples");
  const double quarter = kPi * r / 2;
  const double total = 2 * quarter + 2 * L;
  ProfileSurface s;
  s.n = 2;
  s.topology = Topology::AxisAnchored;
  s.pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t =
        total * static_cast<double>(i) / static_cast<double>(m - 1);
    Vec2 p;
    if (t <= quarter) {
      const double phi = t / r;
      p = {-L - r * std::cos(phi), r * std::sin(phi)};
    } else if (t <= quarter + 2 * L) {
      p = {-L + (t - quarter), r};
    } else {
      const double psi = (t - quarter - 2 * L) / r;
      p = {L + r * std::sin(psi), r * std::cos(psi)};
    }
    s.pts.push_back(p);
  }
  s.pts.front() = {-L - r, 0};
  s.pts.back() = {L + r, 0};
  set_step(s);
  return s;
}

// ---------------------------------------------------------------------------
// dumbbell spec

DumbbellSpec default_dumbbell() { return {}; }

DumbbellSpec bean_dumbbell() {
  DumbbellSpec s;
  s.d = 1.0;
  s.r = 0.18;
  s.junction_beta = 0.6;
  s.turn_margin = 0.35;
  s.eps_I_II = 0.1;
  s.eps_II_III = 0.04;
  s.eps_III_IV = 0.1;
  s.m = 1024;
  return s;
}

void validate(const DumbbellSpec& spec) {
  const double vals[] = {spec.R,           spec.d,
                         spec.r,           spec.R_star,
                         spec.junction_beta, spec.turn_margin,
                         spec.eps_I_II,    spec.eps_II_III,
                         spec.eps_III_IV};
  for (double v : vals)
    require(std::isfinite(v), "DumbbellSpec: parameters must be finite");
  require(spec.R > 0, "DumbbellSpec: R must be positive");
  require(spec.r > 0 && spec.r < spec.R, "DumbbellSpec: need 0 < r < R");
  require(spec.d > 0, "DumbbellSpec: d must be positive");
  require(spec.R_star > spec.r, "DumbbellSpec: need R_star > r");
  require(spec.junction_beta > 0 && spec.junction_beta < kPi / 2,
          "DumbbellSpec: junction_beta must lie in (0, pi/2)");
  require(spec.turn_margin > 0 && spec.turn_margin < 1,
          "DumbbellSpec: turn_margin must lie in (0, 1)");
  require(spec.eps_I_II > 0 && spec.eps_II_III > 0 && spec.eps_III_IV > 0,
          "DumbbellSpec: glue lengths must be positive");
  require(spec.eps_I_II <=
              std::sqrt(spec.R * spec.R - spec.r * spec.r) + 1e-15,
          "DumbbellSpec: eps_I_II must not exceed sqrt(R^2 - r^2)");
  require(spec.m >= 64, "DumbbellSpec: need at least 64 samples");
}

// ---------------------------------------------------------------------------
// turn curve

double TurnCurve::theta_of_x(double x) const {
  if (arc || xs.size() < 2) return 0;
  const double target = std::clamp(x - x0, 0.0, xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), target);
  std::size_t k = (it == xs.begin())
                      ? 0
                      : static_cast<std::size_t>(it - xs.begin()) - 1;
  k = std::min(k, xs.size() - 2);
  const double ta = theta[k], xa = xs[k];
  const double tb = theta[k + 1], xb = xs[k + 1];
  auto speed = [this](double t) {
    return r * nu * std::pow(1.0 / std::cos(t), nu);
  };
  double th = ta + (tb - ta) * (target - xa) / std::max(xb - xa, 1e-300);
  for (int iter = 0; iter < 4; ++iter) {
    const double mid = 0.5 * (ta + th);
    const double cum =
        xa + (th - ta) / 6 * (speed(ta) + 4 * speed(mid) + speed(th));
    th -= (cum - target) / speed(th);
    th = std::clamp(th, 0.0, theta_end);
  }
  return th;
}

double TurnCurve::f(double x) const {
  if (arc) {
    const double u = x - cx;
    return cy - std::sqrt(std::max(0.0, rho * rho - u * u));
  }
  const double th = theta_of_x(x);
  return r * std::pow(1.0 / std::cos(th), nu);
}

double TurnCurve::df(double x) const {
  if (arc) {
    const double u = x - cx;
    return u / std::sqrt(std::max(1e-300, rho * rho - u * u));
  }
  return std::tan(theta_of_x(x));
}

double TurnCurve::d2f(double x) const {
  if (arc) {
    const double u = x - cx;
    const double w = std::max(1e-300, rho * rho - u * u);
    return rho * rho / (w * std::sqrt(w));
  }
  const double th = theta_of_x(x);
  const double sec = 1.0 / std::cos(th);
  return (1 - mu) * sec * sec / (r * std::pow(sec, nu));
}

// ---------------------------------------------------------------------------
// neck layout

namespace {

struct Layout {
  bool feasible = false;
  double f_T = 0, dx_turn = 0, dx_cone = 0, x_T = 0, x_W = 0;
  TurnCurve turn;
};

// Tabulates x(theta) = r nu Int_0^theta sec^nu by cumulative Simpson and
// derives the landmark abscissae. Feasible iff the turn tops out below the
// junction (f_T < f_J) and the waist abscissa stays right of the mirror
// plane.
Layout compute_layout(const DumbbellSpec& spec) {
  Layout L;
  TurnCurve& tc = L.turn;
  tc.r = spec.r;
  tc.mu = spec.turn_margin;
  tc.nu = 1.0 / (1.0 - spec.turn_margin);
  tc.theta_end = kPi / 2 - spec.junction_beta;

  const double f_J = spec.R * std::sin(spec.junction_beta);
  const double slope =
      std::cos(spec.junction_beta) / std::sin(spec.junction_beta);
  const double x_J = spec.p1() - spec.R * std::cos(spec.junction_beta);

  L.f_T = spec.r * std::pow(1.0 / std::cos(tc.theta_end), tc.nu);
  if (!(L.f_T < f_J)) return L;

  const std::size_t K = 4096;
  tc.theta.resize(K + 1);
  tc.xs.resize(K + 1);
  tc.theta[0] = 0;
  tc.xs[0] = 0;
  const double dth = tc.theta_end / static_cast<double>(K);
  auto speed = [&tc](double t) {
    return tc.r * tc.nu * std::pow(1.0 / std::cos(t), tc.nu);
  };
  double acc = 0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double a = dth * static_cast<double>(k - 1);
    const double b = dth * static_cast<double>(k);
    acc += (b - a) / 6 * (speed(a) + 4 * speed(0.5 * (a + b)) + speed(b));
    tc.theta[k] = b;
    tc.xs[k] = acc;
  }
  L.dx_turn = acc;
  L.dx_cone = (f_J - L.f_T) / slope;
  L.x_T = x_J - L.dx_cone;
  L.x_W = L.x_T - L.dx_turn;
  if (!(L.x_W > 0)) return L;
  tc.x0 = L.x_W;
  tc.x1 = L.x_T;
  L.feasible = true;
  return L;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

NeckAssembly assemble_neck(const DumbbellSpec& spec) {
  validate(spec);
  NeckAssembly na;
  na.spec = spec;
  const double R = spec.R;
  const double beta = spec.junction_beta;
  na.x_pole = spec.p1() + R;
  na.x_junction = spec.p1() - R * std::cos(beta);
  na.f_junction = R * std::sin(beta);
  na.slope = std::cos(beta) / std::sin(beta);
  na.waist_r = spec.r;

  Layout L = compute_layout(spec);
  na.turn = L.turn;

  if (L.feasible) {
    if (L.x_W - spec.eps_III_IV < 0)
      throw GluingOverlap(
          "dumbbell: turn/waist glue (eps_III_IV = " + fmt(spec.eps_III_IV) +
          ") crosses the mirror plane; waist abscissa is only " + fmt(L.x_W));
    if (spec.eps_II_III > L.dx_cone)
      throw GluingOverlap(
          "dumbbell: cone/turn glue (eps_II_III = " + fmt(spec.eps_II_III) +
          ") exceeds the cone extent " + fmt(L.dx_cone));

    const double g34 = (1 - spec.turn_margin) / spec.r;
    na.q34 = quintic_c2_coefficients(0, 0, g34, spec.eps_III_IV);
    const double sec_T = 1.0 / std::cos(na.turn.theta_end);
    const double g23 = (1 - spec.turn_margin) * sec_T * sec_T / L.f_T;
    na.q23 = quintic_c2_coefficients(0, 0, g23, spec.eps_II_III);

    const double xg = na.x_junction + spec.eps_I_II;
    const double fs = std::sqrt(R * R - (xg - spec.p1()) * (xg - spec.p1()));
    const double cone_g = na.f_junction + na.slope * spec.eps_I_II;
    const double g12 = fs - cone_g;
    const double g12_d1 = -(xg - spec.p1()) / fs - na.slope;
    const double g12_d2 = -R * R / (fs * fs * fs);
    na.q12 = quintic_c2_coefficients(g12, g12_d1, g12_d2, spec.eps_I_II);

    na.pieces = {
        {NeckPieceKind::Waist, 0, L.x_W - spec.eps_III_IV},
        {NeckPieceKind::WaistGlue, L.x_W - spec.eps_III_IV, L.x_W},
        {NeckPieceKind::Turn, L.x_W, L.x_T},
        {NeckPieceKind::TurnGlue, L.x_T, L.x_T + spec.eps_II_III},
        {NeckPieceKind::Cone, L.x_T + spec.eps_II_III, na.x_junction},
        {NeckPieceKind::BellGlue, na.x_junction, na.x_junction + spec.eps_I_II},
        {NeckPieceKind::Bell, na.x_junction + spec.eps_I_II, na.x_pole},
    };
    return na;
  }

  // Infeasible layout: substitute a circular arc tangent to the bell at the
  // junction, descending to a horizontal waist. The geometry is valid but
  // the arc is generally not mean-convex; certificates report the offender.
  na.arc_fallback = true;
  TurnCurve& tc = na.turn;
  tc.arc = true;
  const double drop = 1 - std::sin(beta);
  double rho = 0.98 * na.x_junction / std::cos(beta);
  if (na.f_junction - rho * drop <= 0.05 * na.f_junction)
    rho = 0.95 * na.f_junction / drop;
  tc.rho = rho;
  tc.x1 = na.x_junction;
  tc.x0 = na.x_junction - rho * std::cos(beta);
  na.waist_r = na.f_junction - rho * drop;
  tc.cx = tc.x0;
  tc.cy = na.waist_r + rho;
  na.pieces = {
      {NeckPieceKind::Waist, 0, tc.x0},
      {NeckPieceKind::Turn, tc.x0, na.x_junction},
      {NeckPieceKind::Bell, na.x_junction, na.x_pole},
  };
  return na;
}

// ---------------------------------------------------------------------------
// neck evaluators

const NeckPiece& NeckAssembly::piece_at(double x) const {
  std::size_t k = pieces.size() - 1;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (x < pieces[i].x1) {
      k = i;
      break;
    }
  }
  return pieces[k];
}

double NeckAssembly::f(double x) const {
  const NeckPiece& pc = piece_at(x);
  const double cone = f_junction + slope * (x - x_junction);
  switch (pc.kind) {
    case NeckPieceKind::Waist:
      return waist_r;
    case NeckPieceKind::WaistGlue:
      return waist_r + q34.eval(x - pc.x0);
    case NeckPieceKind::Turn:
      return turn.f(x);
    case NeckPieceKind::TurnGlue:
      return cone + q23.eval(pc.x1 - x);
    case NeckPieceKind::Cone:
      return cone;
    case NeckPieceKind::BellGlue:
      return cone + q12.eval(x - pc.x0);
    case NeckPieceKind::Bell: {
      const double u = x - spec.p1();
      return std::sqrt(std::max(0.0, spec.R * spec.R - u * u));
    }
  }
  return 0;
}

double NeckAssembly::df(double x) const {
  const NeckPiece& pc = piece_at(x);
  switch (pc.kind) {
    case NeckPieceKind::Waist:
      return 0;
    case NeckPieceKind::WaistGlue:
      return q34.d1(x - pc.x0);
    case NeckPieceKind::Turn:
      return turn.df(x);
    case NeckPieceKind::TurnGlue:
      return slope - q23.d1(pc.x1 - x);
    case NeckPieceKind::Cone:
      return slope;
    case NeckPieceKind::BellGlue:
      return slope + q12.d1(x - pc.x0);
    case NeckPieceKind::Bell: {
      const double u = x - spec.p1();
      const double fv =
          std::sqrt(std::max(1e-300, spec.R * spec.R - u * u));
      return -u / fv;
    }
  }
  return 0;
}

double NeckAssembly::d2f(double x) const {
  const NeckPiece& pc = piece_at(x);
  switch (pc.kind) {
    case NeckPieceKind::Waist:
      return 0;
    case NeckPieceKind::WaistGlue:
      return q34.d2(x - pc.x0);
    case NeckPieceKind::Turn:
      return turn.d2f(x);
    case NeckPieceKind::TurnGlue:
      return q23.d2(pc.x1 - x);
    case NeckPieceKind::Cone:
      return 0;
    case NeckPieceKind::BellGlue:
      return q12.d2(x - pc.x0);
    case NeckPieceKind::Bell: {
      const double u = x - spec.p1();
      const double fv =
          std::sqrt(std::max(1e-300, spec.R * spec.R - u * u));
      return -spec.R * spec.R / (fv * fv * fv);
    }
  }
  return 0;
}

double NeckAssembly::mean_curvature(double x) const {
  const double fv = f(x), d1 = df(x), d2 = d2f(x);
  const double w = 1 + d1 * d1;
  return (w - fv * d2) / (fv * w * std::sqrt(w));
}

std::vector<double> NeckAssembly::junctions() const {
  std::vector<double> xs;
  for (std::size_t i = 1; i < pieces.size(); ++i) xs.push_back(pieces[i].x0);
  return xs;
}

// ---------------------------------------------------------------------------
// junction jumps

// One-sided degree-7 interpolants from 8 nodes per side, extrapolated to the
// junction; exact on the piecewise-polynomial sides, and the analytic sides
// contribute only O(h^6) extrapolation error in f''.
std::array<double, 3> junction_jumps(const NeckAssembly& neck, double x,
                                     double h) {
  constexpr int N = 8;
  auto fit = [&](double side) {
    double xs[N], c[N];
    for (int k = 0; k < N; ++k) {
      xs[k] = x + side * h * static_cast<double>(k + 1);
      c[k] = neck.f(xs[k]);
    }
    for (int j = 1; j < N; ++j)
      for (int i = N - 1; i >= j; --i)
        c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
    double p = c[N - 1], dp = 0, ddp = 0;
    for (int i = N - 2; i >= 0; --i) {
      ddp = ddp * (x - xs[i]) + 2 * dp;
      dp = dp * (x - xs[i]) + p;
      p = p * (x - xs[i]) + c[i];
    }
    return std::array<double, 3>{p, dp, ddp};
  };
  const auto left = fit(-1.0);
  const auto right = fit(+1.0);
  return {std::abs(right[0] - left[0]), std::abs(right[1] - left[1]),
          std::abs(right[2] - left[2])};
}

// ---------------------------------------------------------------------------
// certificates

NeckCertificates neck_certificates(const NeckAssembly& neck) {
  NeckCertificates cert;
  cert.min_H = std::numeric_limits<double>::infinity();
  cert.min_H_x = 0;
  const std::size_t K = 4000;
  for (const NeckPiece& pc : neck.pieces) {
    if (pc.x1 - pc.x0 <= 0) continue;
    if (pc.kind == NeckPieceKind::Bell) {
      // exact: spheres have constant mean curvature 2/R
      const double H = 2 / neck.spec.R;
      if (H < cert.min_H) {
        cert.min_H = H;
        cert.min_H_x = 0.5 * (pc.x0 + pc.x1);
      }
      continue;
    }
    const bool neck_glue = pc.kind == NeckPieceKind::WaistGlue ||
                           pc.kind == NeckPieceKind::TurnGlue ||
                           (neck.arc_fallback && pc.kind == NeckPieceKind::Turn);
    for (std::size_t k = 0; k <= K; ++k) {
      const double x =
          pc.x0 + (pc.x1 - pc.x0) * static_cast<double>(k) /
                      static_cast<double>(K);
      const double H = neck.mean_curvature(x);
      if (H < cert.min_H) {
        cert.min_H = H;
        cert.min_H_x = x;
      }
      if (pc.kind == NeckPieceKind::BellGlue)
        cert.max_p_pp_bell_glue =
            std::max(cert.max_p_pp_bell_glue, neck.f(x) * neck.d2f(x));
      if (neck_glue)
        cert.max_pp_turn_glues =
            std::max(cert.max_pp_turn_glues, neck.d2f(x));
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// assembly -> sampled profile

ProfileSurface build_dumbbell(const DumbbellSpec& spec) {
  NeckAssembly neck = assemble_neck(spec);
  NeckCertificates cert = neck_certificates(neck);
  if (!cert.pass(spec.r)) {
    std::string msg = "dumbbell is not mean-convex";
    if (neck.arc_fallback)
      msg += " (turn layout infeasible, arc fallback used)";
    msg += ": min H = " + fmt(cert.min_H) + " at sample (x = " +
           fmt(cert.min_H_x) + ", f = " + fmt(neck.f(cert.min_H_x)) + ")";
    if (!(cert.max_p_pp_bell_glue < 1))
      msg += "; bell glue f*f'' = " + fmt(cert.max_p_pp_bell_glue) + " >= 1";
    if (!(cert.max_pp_turn_glues <= 1 / spec.r))
      msg += "; neck glue f'' = " + fmt(cert.max_pp_turn_glues) + " > 1/r = " +
             fmt(1 / spec.r);
    throw NotMeanConvex(msg);
  }

  // Dense right half, piecewise in x (latitude on the bell so the pole is
  // resolved), then mirror across x = 0 and resample uniformly.
  const double dense_step = neck.x_pole / (8.0 * static_cast<double>(spec.m));
  std::vector<Vec2> right;
  auto sample_piece = [&](const NeckPiece& pc) {
    if (pc.x1 - pc.x0 <= 0) return;
    if (pc.kind == NeckPieceKind::Bell) {
      const double c0 = (spec.p1() - pc.x0) / spec.R;
      const double b0 = std::acos(std::clamp(c0, -1.0, 1.0));
      const std::size_t nb = std::max<std::size_t>(
          64, static_cast<std::size_t>(spec.R * (kPi - b0) / dense_step));
      for (std::size_t k = 0; k <= nb; ++k) {
        const double b =
            b0 + (kPi - b0) * static_cast<double>(k) / static_cast<double>(nb);
        right.push_back(
            {spec.p1() - spec.R * std::cos(b), spec.R * std::sin(b)});
      }
      right.back() = {neck.x_pole, 0};
      return;
    }
    const std::size_t nx = std::max<std::size_t>(
        48, static_cast<std::size_t>((pc.x1 - pc.x0) / dense_step));
    for (std::size_t k = 0; k < nx; ++k) {
      const double x =
          pc.x0 + (pc.x1 - pc.x0) * static_cast<double>(k) /
                      static_cast<double>(nx);
      right.push_back({x, neck.f(x)});
    }
  };
  for (const NeckPiece& pc : neck.pieces) sample_piece(pc);

  ProfileSurface s;
  s.n = 2;
  s.topology = Topology::AxisAnchored;
  s.pts.reserve(2 * right.size());
  for (std::size_t i = right.size(); i-- > 1;)
    s.pts.push_back({-right[i].x, right[i].y});
  for (const Vec2& p : right) s.pts.push_back(p);
  set_step(s);
  s = resample_arclength(s, spec.m);

  if (auto hit = self_intersects(s))
    throw NotEmbedded("dumbbell profile self-intersects near x = " +
                      fmt(hit->where.x));
  return s;
}

// ---------------------------------------------------------------------------
// bean

ProfileSurface build_bean(int n, std::size_t m) {
  require(n == 1 || n == 2, "build_bean: n must be 1 or 2");
  require(m >= 64, "build_bean: need at least 64 samples");
  if (n == 1) {
    // Eccentric convex oval r(th) = 1 + 0.25 cos th + 0.06 cos 2th. A simple
    // closed plane curve with positive curvature is necessarily convex, so a
    // mean-convex plane curve cannot be non-star-shaped; the oval instead has
    // a positive star-shapedness waiting time through the outside-ball
    // clause (it starts inside the half-diameter ball).
    ProfileSurface s;
    s.n = 1;
    s.topology = Topology::ClosedLoop;
    s.pts.reserve(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const double th =
          2 * kPi * static_cast<double>(i) / static_cast<double>(m);
      const double rad = 1 + 0.25 * std::cos(th) + 0.06 * std::cos(2 * th);
      s.pts.push_back({rad * std::cos(th), rad * std::sin(th)});
    }
    s.pts.push_back(s.pts.front());
    set_step(s);
    const std::vector<double> H = mean_curvature(s);
    const double minH = *std::min_element(H.begin(), H.end());
    if (!(minH > 0))
      throw InvalidGeometry("bean curve lost positive curvature: min H = " +
                            fmt(minH));
    return s;
  }

  DumbbellSpec spec = bean_dumbbell();
  spec.m = m;
  ProfileSurface s = build_dumbbell(spec);

  // Verified non-star-shapedness: the diameter midpoint plus a coarse grid
  // of interior cross-section points must all see some ray with multiple
  // crossings.
  const Vec2 mid = diameter_info(s).midpoint();
  if (is_star_shaped(s, mid).star_shaped)
    throw InvalidGeometry("bean surface is star-shaped from the midpoint");
  double xlo = s.pts.front().x, xhi = s.pts.back().x, fhi = 0;
  for (const Vec2& p : s.pts) fhi = std::max(fhi, p.y);
  const int G = 16;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      const Vec2 c = {xlo + (xhi - xlo) * (i + 0.5) / G,
                      fhi * (j + 0.5) / G};
      if (!point_inside(s, c)) continue;
      if (is_star_shaped(s, c).star_shaped)
        throw InvalidGeometry(
            "bean surface is star-shaped from interior point (" + fmt(c.x) +
            ", " + fmt(c.y) + ")");
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// glue auto-sizing

namespace {

// Assembly-free check of the bell-glue certificate f * f'' < 1 for a
// candidate eps_I_II.
bool bell_glue_ok(const DumbbellSpec& spec, double eps) {
  const double beta = spec.junction_beta;
  const double x_J = spec.p1() - spec.R * std::cos(beta);
  const double f_J = spec.R * std::sin(beta);
  const double slope = std::cos(beta) / std::sin(beta);
  const double xg = x_J + eps;
  const double u = xg - spec.p1();
  const double arg = spec.R * spec.R - u * u;
  if (arg <= 0) return false;
  const double fs = std::sqrt(arg);
  QuinticCoeffs q = quintic_c2_coefficients(
      fs - (f_J + slope * eps), -u / fs - slope, -spec.R * spec.R / (fs * fs * fs),
      eps);
  const std::size_t K = 2000;
  for (std::size_t k = 0; k <= K; ++k) {
    const double xi = eps * static_cast<double>(k) / static_cast<double>(K);
    const double fv = f_J + slope * xi + q.eval(xi);
    if (fv <= 0) return false;
    if (fv * q.d2(xi) >= 1) return false;
  }
  return true;
}

}  // namespace

DumbbellSpec auto_epsilon(DumbbellSpec spec) {
  validate(spec);
  HullResult hull = hull_two_balls(spec.R, spec.d, 2);
  if (!hull.bridge)
    throw CannotSatisfy(
        "auto_epsilon: no tangent bridge exists at d = " + fmt(spec.d) +
        "; the balls have no attach latitude to clear");
  const double x_J = spec.p1() - spec.R * std::cos(spec.junction_beta);
  const double room = hull.bridge->x_right - x_J;
  if (room <= 0)
    throw CannotSatisfy(
        "auto_epsilon: bridge attaches at x = " + fmt(hull.bridge->x_right) +
        ", inside the junction abscissa " + fmt(x_J));

  double e12 = std::min({spec.eps_I_II, 0.9 * room,
                         std::sqrt(spec.R * spec.R - spec.r * spec.r)});
  int halvings = 0;
  while (!bell_glue_ok(spec, e12)) {
    if (++halvings > 40)
      throw CannotSatisfy(
          "auto_epsilon: bell glue certificate still fails after 40 "
          "halvings");
    e12 *= 0.5;
  }
  spec.eps_I_II = e12;

  Layout L = compute_layout(spec);
  if (L.feasible) {
    spec.eps_II_III = std::min(spec.eps_II_III, 0.9 * L.dx_cone);
    spec.eps_III_IV = std::min(spec.eps_III_IV, 0.9 * L.x_W);
  }
  return spec;
}

}  // namespace imcf
