#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "imcf/constructions.hpp"
#include "imcf/geometry.hpp"

// Outward-minimizing certificates for axisymmetric bodies: tangent minimal
// bridges between two balls, cap+bridge hull areas, dumbbell audit.
namespace imcf {

struct BridgeProfile {
  int n = 2;
  double x_left = 0, x_right = 0;     // tangency abscissae
  double attach_left = 0;             // tangency latitude on the left ball
  double attach_right = 0;            // and on the right ball (radians)
  std::vector<Vec2> f;                // samples (x, radius), f > 0
  double c = 0, b = 0;                // n = 2: f = c cosh((x - b)/c)
  double max_interior_H = 0;          // minimality residual
};

struct HullResult {
  double body_area = 0;
  double hull_area = 0;
  double margin = 0;  // hull_area - body_area; negative = not minimizing
  bool is_outward_minimizing = true;
  bool is_strictly = true;
  std::optional<BridgeProfile> bridge;
  bool extent_ok = true;      // bridge x-extent within [-p1, p1]
  bool cylinder_ok = true;    // bridge radius <= R
  double clearance = 0;       // dumbbell audit: neck-to-bridge distance - h
};

// Minimal surface of revolution f'' = (n-1)(1 + f'^2)/f meeting both spheres
// tangentially (balls of radius R_left/R_right, gap d between them). Solved
// by damped shooting on the tangency latitudes; for n = 2 cross-checked
// against the cosh closed form. Returns nullopt when no tangent bridge
// exists; throws NoConvergence if bracketing fails while one should.
std::optional<BridgeProfile> minimal_bridge(double R_left, double R_right,
                                            double d, int n,
                                            std::size_t m = 2048);

// Candidate hull of two balls of radius R at gap d: spherical caps outside
// the tangency latitudes plus the minimal bridge, taking the smaller-area
// tangent catenoid when two exist. Verdict per area margin with tol_area =
// 1e-6 * body_area. n = 2 only.
HullResult hull_two_balls(double R, double d, int n, std::size_t m = 2048);

// Bisects the sign change of the two-ball margin over d in [d_lo, d_hi].
double margin_threshold(double R, int n, double d_lo = 0.01, double d_hi = 1.0,
                        double tol = 1e-3);

// Builds the dumbbell, verifies its modified zone clears the bridge
// (HullTouched otherwise), and certifies not-strictly-outward-minimizing by
// the comparison body dumbbell U (solid under the bridge).
HullResult audit_dumbbell_hull(const DumbbellSpec& spec);

// Convex bodies are outward minimizing; returns true iff the profile is
// convex (n = 1 loop) or the revolved body is (n = 2 anchored profile with
// nonnegative turning). Used to gate admissibility-preservation audits.
bool convex_certificate(const ProfileSurface& s);

}  // namespace imcf
