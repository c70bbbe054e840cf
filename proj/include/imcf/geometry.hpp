#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "imcf/errors.hpp"

namespace imcf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  return n > 0 ? a / n : Vec2{0, 0};
}
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

enum class Topology { ClosedLoop, AxisAnchored };

// Sampled generating curve of a rotationally symmetric hypersurface about the
// x-axis (n >= 2, samples (x, f) with f >= 0), or a plain closed plane curve
// (n = 1, samples (x, y)).
//
// Storage conventions:
//  - ClosedLoop: the first sample is duplicated at the back, so pts.size() is
//    the number of distinct samples plus one and every stored consecutive pair
//    is a curve segment.
//  - AxisAnchored: open polyline whose endpoints lie on the axis (f = 0) and
//    which meets the axis perpendicularly.
//
// Orientation conventions (enforced by normalize_orientation and all
// builders):
//  - ClosedLoop curves are counterclockwise (positive signed area); the
//    outward unit normal is (T_y, -T_x) for unit tangent T.
//  - AxisAnchored profiles run from the left anchor (smaller x) to the right
//    anchor; the outward unit normal is (-T_f, T_x).
struct ProfileSurface {
  int n = 1;
  Topology topology = Topology::ClosedLoop;
  std::vector<Vec2> pts;
  double h = 0.0;  // nominal arclength step

  bool closed() const { return topology == Topology::ClosedLoop; }
  // Number of distinct samples.
  std::size_t sample_count() const {
    if (pts.empty()) return 0;
    return closed() ? pts.size() - 1 : pts.size();
  }
  std::size_t segment_count() const { return pts.empty() ? 0 : pts.size() - 1; }
};

// Star-shaped representation r(theta) over a uniform angular grid.
// n = 1: r[j] at theta_j = 2*pi*j/m, periodic.
// n = 2: r[j] at colatitude phi_j = pi*j/(m-1) from the +x axis, with
//        reflective ends; center.y must be 0 (center on the axis).
struct RadialGraph {
  int n = 1;
  Vec2 center{0, 0};
  std::vector<double> r;

  double grid_step() const {
    return n == 1 ? 2.0 * M_PI / double(r.size()) : M_PI / double(r.size() - 1);
  }
};

struct DiameterInfo {
  double value = 0.0;
  // Endpoints in the meridian plane. For n >= 2 the second endpoint is
  // reported at the opposite azimuth, i.e. with its f-coordinate negated, so
  // that the midpoint below is the true 3-D midpoint (intersected with the
  // meridian plane).
  Vec2 a{0, 0}, b{0, 0};
  Vec2 midpoint() const { return 0.5 * (a + b); }
};

struct InradiusInfo {
  double value = 0.0;
  Vec2 center{0, 0};  // half-plane point (x, f >= 0) for n >= 2
};

enum class IntersectionKind { SegmentPair, AxisCrossing };

struct IntersectionReport {
  IntersectionKind kind = IntersectionKind::SegmentPair;
  std::size_t seg_a = 0, seg_b = 0;
  Vec2 where{0, 0};
};

double total_length(const ProfileSurface& s);
void normalize_orientation(ProfileSurface& s);
ProfileSurface translated(const ProfileSurface& s, Vec2 delta);
// Reflection across the plane {x = x0} (reverses traversal to restore the
// orientation convention).
ProfileSurface reflected_x(const ProfileSurface& s, double x0 = 0.0);

// Uniform-arclength resampling with cubic (Catmull-Rom) interpolation of
// positions. m is the number of distinct samples.
ProfileSurface resample_arclength(const ProfileSurface& s, std::size_t m);

// Per-sample unit tangents / outward unit normals (axis anchors handled by
// even reflection of the profile across the axis).
std::vector<Vec2> tangents(const ProfileSurface& s);
std::vector<Vec2> normals(const ProfileSurface& s);

// Signed curvature of the generating curve w.r.t. the outward normal
// (circle of radius R: +1/R).
std::vector<double> profile_curvature(const ProfileSurface& s);

// Mean curvature: n = 1 -> kappa; n >= 2 -> kappa + (n-1)*<nu,e_radial>/f,
// with the smooth limit n*kappa at axis anchors.
std::vector<double> mean_curvature(const ProfileSurface& s);

// n = 1: curve length; n = 2: surface-of-revolution area (Pappus quadrature,
// exact for the piecewise-linear profile).
double area(const ProfileSurface& s);

// n = 1: enclosed plane area; n = 2: enclosed volume of revolution.
double enclosed_volume(const ProfileSurface& s);

DiameterInfo diameter_info(const ProfileSurface& s);
double diameter(const ProfileSurface& s);

InradiusInfo inradius_info(const ProfileSurface& s);
double inradius(const ProfileSurface& s);

// All-pairs segment test with spatial hashing; touching within 0.25h counts.
// For n >= 2 also reports axis crossing (f < 0 at any sample).
std::optional<IntersectionReport> self_intersects(const ProfileSurface& s);

// Region membership. n = 1: point inside the closed curve; n >= 2: point
// (x, f) of the half-plane inside the revolved body's cross-section (the
// f-coordinate may be given with either sign).
bool point_inside(const ProfileSurface& s, Vec2 p);

// Exact count of crossings of the ray {c + t*d, t > 0} with the generating
// polyline.
std::size_t ray_crossings(const ProfileSurface& s, Vec2 c, Vec2 d);

// Conversion to/from the star-shaped representation. to_radial_graph casts
// m rays from the center and requires exactly one crossing per ray
// (NotAGraph otherwise). For n = 2 the center must lie on the axis.
RadialGraph to_radial_graph(const ProfileSurface& s, Vec2 center,
                            std::size_t m);
ProfileSurface from_radial_graph(const RadialGraph& g);

}  // namespace imcf
