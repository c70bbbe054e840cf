#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "imcf/flow.hpp"
#include "imcf/geometry.hpp"

// Reflection/admissibility certificates, star-shapedness, waiting time, the
// polar gradient estimate, and containment monitors.
namespace imcf {

// Hyperplane {x : <x, nu> = lambda}. For axisymmetric bodies (n = 2) nu is
// the in-plane part of a 3-d normal (nu.x, nu.y, 0); every plane orbit under
// the rotational symmetry has such a representative.
struct Plane {
  Vec2 nu{1, 0};  // unit
  double lambda = 0;
};

struct AdmissibilityReport {
  bool admissible = true;
  double violation = 0;  // max penetration depth of a reflected cell center
};

// Reflects the rasterized region below the plane across it and tests the
// image against the region (cell grid tied to h for n = 1, a 3-d cell loop
// over the revolved body for n = 2). tol < 0 means use h.
AdmissibilityReport is_admissible(const ProfileSurface& s, const Plane& plane,
                                  double tol = -1);

struct ReflectionProfile {
  std::vector<Vec2> directions;
  std::vector<double> lambda_max;  // largest admissible threshold per
                                   // direction: planes <x, nu> = lambda with
                                   // lambda <= lambda_max are admissible
  double Lambda = 0;               // max over directions of -lambda_max, >= 0
  Vec2 origin{0, 0};               // diameter midpoint used as the origin
};

// Binary-searches lambda_max per direction (tolerance h/4) in coordinates
// centered at the diameter midpoint; every plane whose reflected halfspace
// sits at distance >= Lambda below the origin is then admissible.
ReflectionProfile reflection_profile(const ProfileSurface& s,
                                     std::size_t directions);

struct StarReport {
  bool star_shaped = true;
  double min_support = 0;        // min <nu, (p - c)/|p - c|> over samples
  std::size_t max_crossings = 1; // worst ray
};

// Ray-casting over an angular grid matched to the sample count. Throws
// CenterOutside if the center is not enclosed.
StarReport is_star_shaped(const ProfileSurface& s, Vec2 center);

// Waiting time n log(diam / R); throws InvalidGeometry unless diam >= 2R > 0.
double t_star(double diam, double R, int n);
double t_star(const ProfileSurface& s);  // from measured diam and inradius

// Earliest recorded frame that is star-shaped about the frame-0 diameter
// midpoint AND lies outside the ball of radius diam(0)/2 about it (within
// h); nullopt if never.
std::optional<double> first_star_time(const FlowTrajectory& traj);

struct GradientAudit {
  double max_slack = 0;       // max |Dr| - r Lambda / sqrt(r^2 - Lambda^2)
  std::size_t audited = 0;    // samples outside the ball
  std::size_t skipped = 0;    // samples with r <= Lambda
};

// Polar-graph slope audit of the samples outside B_ball_radius(center).
// Throws NotAGraph if that portion fails the single-crossing ray test.
GradientAudit gradient_estimate_audit(const ProfileSurface& s, double Lambda,
                                      Vec2 center, double ball_radius);

struct ContainmentReport {
  struct Frame {
    double t = 0;
    double inner_slack = 0;  // penetration of B_{R e^{t/n}}(x) past the frame
    double outer_slack = 0;  // overshoot past B_{e^{t/n} diam/2}(c)
    bool inner_ok = true, outer_ok = true;
  };
  std::vector<Frame> frames;
  std::optional<double> escape_time;  // first t covering B_{diam^2/(2R)}(c)
  double max_inner_slack = 0, max_outer_slack = 0;
};

// Per-frame inner-ball and outer-ball containment with slack h tolerance;
// violations are reported, not thrown.
ContainmentReport containment_monitor(const FlowTrajectory& traj,
                                      Vec2 inner_center, double R,
                                      Vec2 outer_center, double diam);

}  // namespace imcf
