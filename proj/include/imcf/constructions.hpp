#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "imcf/geometry.hpp"

// Builders for the test surfaces: spheres, tori, bean blobs, and the glued
// mean-convex dumbbell with its C^2 certificates.
namespace imcf {

// p(x) = A x^3 + B x^4 + C x^5; vanishes to second order at 0 by form.
struct QuinticCoeffs {
  double A = 0, B = 0, C = 0;
  double eps = 0;  // gluing interval length

  double eval(double x) const { return ((C * x + B) * x + A) * x * x * x; }
  double d1(double x) const {
    return ((5 * C * x + 4 * B) * x + 3 * A) * x * x;
  }
  double d2(double x) const { return ((20 * C * x + 12 * B) * x + 6 * A) * x; }
  double d3(double x) const { return (60 * C * x + 24 * B) * x + 6 * A; }
};

// Coefficients joining zero data at 0 to (g, g', g'') at eps:
//   A = 10 g/e^3 - 4 g'/e^2 + g''/(2e)
//   B = -15 g/e^4 + 7 g'/e^3 - g''/e^2
//   C = 6 g/e^5 - 3 g'/e^4 + g''/(2e^3)
// Throws DegenerateInterval if eps <= 0.
QuinticCoeffs quintic_c2_coefficients(double g, double g_d1, double g_d2,
                                      double eps);

// Determinant of the 3x3 boundary-value matrix at interval length eps (2e^9).
double quintic_matrix_det(double eps);

// --- simple analytic fixtures ---------------------------------------------

ProfileSurface build_circle(double R, std::size_t m, Vec2 center = {0, 0});
ProfileSurface build_sphere(double R, std::size_t m, double center_x = 0);
// n = 1: ellipse loop with semi-axes (a, b). n = 2: revolved half-ellipse.
ProfileSurface build_ellipse(double a, double b, int n, std::size_t m);
// Revolved circle of radius b at distance a from the axis (a > b > 0).
ProfileSurface build_torus(double a, double b, std::size_t m);
// Straight tube of radius r and half-length L, spherically capped (n = 2).
ProfileSurface build_capsule(double r, double L, std::size_t m);

// Mean-convex non-round blob for waiting-time experiments.
//  n = 1: eccentric convex oval r(th) = 1 + 0.25 cos th + 0.06 cos 2th (a
//         positively curved plane curve is convex, hence already star-shaped;
//         the waiting-time bound is then exercised through the outside-ball
//         clause only).
//  n = 2: gentle two-bell body (neck machinery below) that is verifiably not
//         star-shaped with respect to its centroid and diameter midpoint.
// Build-time checks: min H > 0; for n = 2 additionally non-star-shapedness
// from every point of a coarse interior grid. Violations throw
// InvalidGeometry (they signal a broken preset, not bad user input).
ProfileSurface build_bean(int n, std::size_t m);

// --- dumbbell ---------------------------------------------------------------

// Two bells of radius R with centers at +-p1 (p1 = R + d/2) joined by a thin
// axisymmetric neck; gluing zones are quintic C^2 joins. eps_* are the three
// gluing interval lengths (x-extents), outermost (bell side) to innermost
// (waist side); zero means pick automatically. R_star is the legacy handle
// radius of the over-the-top construction; an over-the-top tube cannot be
// realized as an embedded surface of revolution, so the parameter is only
// validated (R_star > r) and recorded in reports.
struct DumbbellSpec {
  double R = 1.0;
  double d = 0.31;
  double r = 0.02;
  double R_star = 4.0;
  double junction_beta = 0.42;  // bell latitude where the neck attaches (rad)
  double turn_margin = 0.36;    // H-reserve of the turn curve, in (0, 1)
  double eps_I_II = 0.05;       // bell <-> cone glue x-extent
  double eps_II_III = 0.05;     // cone <-> turn glue x-extent
  double eps_III_IV = 0.025;    // turn <-> waist glue x-extent
  std::size_t m = 2048;

  double p1() const { return R + d / 2; }
};

DumbbellSpec default_dumbbell();

// Throws InvalidParams unless 0 < r < R, d > 0, R_star > r, eps >= 0,
// eps_I_II <= sqrt(R^2 - r^2), 0 < junction_beta < pi/2, 0 < turn_margin < 1.
void validate(const DumbbellSpec& spec);

enum class NeckPieceKind { Waist, WaistGlue, Turn, TurnGlue, Cone, BellGlue,
                           Bell };

struct NeckPiece {
  NeckPieceKind kind;
  double x0 = 0, x1 = 0;  // abscissa range, right half (0 <= x0 < x1)
};

// Monotone turn curve f = r sec^nu(theta) rising from the waist (theta = 0)
// to the cone slope (theta = pi/2 - junction_beta); along it H = mu cos
// (theta)/f > 0. x(theta) is tabulated by Simpson quadrature of dx/dtheta =
// r nu sec^nu. The arc variant is the infeasible-layout fallback (valid
// geometry, H <= 0 somewhere).
struct TurnCurve {
  double r = 0, mu = 0, nu = 0;
  double theta_end = 0;
  double x0 = 0, x1 = 0;           // waist-side and cone-side abscissae
  std::vector<double> theta, xs;   // cumulative table, theta[0] = 0
  bool arc = false;
  double rho = 0, cx = 0, cy = 0;  // arc circle (center above the profile)

  double theta_of_x(double x) const;
  double f(double x) const;
  double df(double x) const;
  double d2f(double x) const;
};

// Piecewise-analytic right half of the dumbbell profile: f(x) on [0, x_pole]
// with closed-form derivatives for the certificate and junction-jump tests.
// The full profile is this half mirrored across x = 0.
struct NeckAssembly {
  DumbbellSpec spec;
  std::vector<NeckPiece> pieces;  // ordered by x, Waist first
  double x_pole = 0;              // p1 + R
  double x_junction = 0;          // bell/cone tangency abscissa
  double f_junction = 0;          // = R sin(junction_beta)
  double slope = 0;               // cone df/dx = cot(junction_beta)
  double waist_r = 0;             // spec.r, or the fallback arc bottom radius
  TurnCurve turn;
  QuinticCoeffs q34, q23, q12;    // waist-, cone- (reversed), bell-side glues
  bool arc_fallback = false;      // turn replaced by a fitted circular arc

  double f(double x) const;
  double df(double x) const;
  double d2f(double x) const;
  // Revolved-graph mean curvature (1 + f'^2 - f f'') / (f (1 + f'^2)^{3/2}).
  double mean_curvature(double x) const;
  // Piece boundaries interior to (0, x_pole), ascending.
  std::vector<double> junctions() const;
  const NeckPiece& piece_at(double x) const;
};

// Lays out waist / glue / turn / glue / cone / glue / bell on the right half.
// When the mean-convex turn does not fit the gap, falls back to a circular
// arc (valid geometry, H < 0 somewhere) so the caller's H check can point at
// the offending sample. Throws GluingOverlap if gluing zones collide.
NeckAssembly assemble_neck(const DumbbellSpec& spec);

// One-sided degree-5 polynomial fits on each side of x (6 points, spacing h)
// extrapolated to x; returns |jump| of f, f', f''. Exact on quintic sides.
std::array<double, 3> junction_jumps(const NeckAssembly& neck, double x,
                                     double h = 1e-3);

// Mean-convexity certificates evaluated on the closed-form assembly.
struct NeckCertificates {
  double max_p_pp_bell_glue = 0;   // max f * f''            (bell <-> cone)
  double max_pp_turn_glues = 0;    // max f''                (both neck glues)
  double min_H = 0;                // over a dense sample of the right half
  double min_H_x = 0;              // abscissa of the minimum
  bool pass(double r) const {
    return max_p_pp_bell_glue < 1.0 && max_pp_turn_glues <= 1.0 / r &&
           min_H > 0.0;
  }
};

NeckCertificates neck_certificates(const NeckAssembly& neck);

// Assembles, certifies, samples, and mirrors. Throws NotMeanConvex (message
// carries the offending sample) if a certificate or the direct H check
// fails; GluingOverlap if gluing zones collide.
ProfileSurface build_dumbbell(const DumbbellSpec& spec);

// Chooses the gluing lengths: eps_I_II strictly inside the room between the
// junction and the bridge attach latitude of the two-ball hull, then halved
// (up to 40 times) until f*f'' < 1 holds on the bell glue; the neck-side eps
// are clamped to their zones. Throws CannotSatisfy if the two-ball hull has
// no bridge or no eps works. Idempotent.
DumbbellSpec auto_epsilon(DumbbellSpec spec);

// Gentle preset reused by build_bean(2).
DumbbellSpec bean_dumbbell();

}  // namespace imcf
