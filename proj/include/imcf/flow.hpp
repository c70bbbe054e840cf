#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imcf/geometry.hpp"

// Explicit time integration of inverse mean curvature flow (speed 1/H along
// the outward normal) with event detection and trajectory recording.
namespace imcf {

struct FlowConfig {
  double t_end = 1.0;
  double cfl = 0.25;           // in (0, 0.5]
  double eps_H = 0.0;          // singularity threshold; 0 = 1e-3 * min H(0)
  double kappa_max = 0.0;      // curvature blowup threshold; 0 = 1e4 / diam(0)
  int resample_every = 16;     // steps between arclength resamplings; 0 = off
  double record_every = 0.01;  // flow time between recorded frames
  std::size_t m = 0;           // working sample count; 0 = keep input
  std::size_t max_steps = 200'000'000;
  bool rk2 = true;             // Heun refinement of the Euler step
  bool check_self_intersection = true;
};

struct FrameDiagnostics {
  double area = 0;
  double min_H = 0;
  double max_H = 0;
  bool embedded = true;
};

struct FlowFrame {
  double t = 0;
  ProfileSurface surface;
  FrameDiagnostics diag;
};

enum class FlowEventKind {
  Completed,
  SingularityDetected,
  SelfIntersection,
  StoppedMaxSteps,
};

std::string to_string(FlowEventKind kind);

struct FlowEvent {
  FlowEventKind kind = FlowEventKind::Completed;
  double t_event = 0;
  std::string detail;
  std::optional<IntersectionReport> intersection;
};

struct FlowTrajectory {
  std::vector<FlowFrame> frames;  // first frame at t = 0, times increasing
  FlowEvent event;
};

// Largest stable explicit step: cfl * h_min^2 * min(min H, (min H)^2). The
// linearized normal speed 1/H diffuses with coefficient 1/H^2, so the
// parabolic bound scales with h^2 min H^2 where H < 1 and h^2 min H above.
double stable_dt(const ProfileSurface& s, double cfl);

// One explicit step of dF/dt = nu / H (forward Euler, optional Heun pass).
// Throws StabilityViolation if dt > 0.5 * h_min^2 * min H, AxisSingularity /
// DegenerateCurve from the curvature evaluation.
ProfileSurface step(const ProfileSurface& s, double dt, bool rk2 = true);

// Integrates until t_end or an event: min H <= eps_H or max |kappa| >=
// kappa_max (SingularityDetected), profile crossing itself within 0.25 h
// (SelfIntersection). Resamples to uniform arclength every resample_every
// steps, records frames every record_every of flow time plus the final one.
FlowTrajectory run(const ProfileSurface& s, const FlowConfig& cfg);

// Scalar scheme for star-shaped surfaces: dr/dt = v / H with the graphical
// speed v = sqrt(1 + |Dr|^2 / r^2); n = 1 full circle, n = 2 axisymmetric
// colatitude graph. Throws LostStarShape if r <= 0 or H <= 0 (a numerics
// bug, not an expected event). Frames are converted back to profiles.
FlowTrajectory run_radial_graph(const RadialGraph& g, const FlowConfig& cfg);

struct ResidualStats {
  double max_residual = 0;   // max |div(grad u / |grad u|) - |grad u||
  double mean_residual = 0;
  std::size_t cells = 0;     // interior cells entering the max
  double t_first = 0, t_last = 0;
};

// Rasterizes the arrival time u(x) = t over the annulus swept between the
// first and last frame and evaluates the level-set residual on interior
// cells (axisymmetric divergence for n = 2). Throws NotFoliated if
// consecutive frames fail to nest.
ResidualStats arrival_time_residual(const FlowTrajectory& traj,
                                    std::size_t grid = 128);

// Same, over the union of several trajectories sharing one ambient grid;
// throws NotFoliated if two trajectories sweep a common cell.
ResidualStats arrival_time_residual(
    const std::vector<const FlowTrajectory*>& trajs, std::size_t grid = 128);

struct AvoidanceReport {
  struct Entry {
    double t = 0;
    double ell = 0;  // squared distance between the two frames
    bool contained = true;
  };
  std::vector<Entry> entries;
  double min_increment = 0;  // min of ell(t_{k+1}) - ell(t_k)
  bool contained_all = true;
};

// Tracks ell(t) = dist^2(N_t, N~_t) across synchronized frames and the
// per-frame containment of the inner region in the outer. Throws
// PreconditionViolated unless the inner surface starts strictly inside.
AvoidanceReport avoidance_check(const FlowTrajectory& outer,
                                const FlowTrajectory& inner);

}  // namespace imcf
