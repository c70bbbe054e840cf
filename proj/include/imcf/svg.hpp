#pragma once

#include <string>
#include <vector>

#include "imcf/geometry.hpp"

// Minimal SVG snapshots: profile curves plus diagnostic circles, so the
// containment audits can be eyeballed. Plot-emitting only.
namespace imcf::svg {

struct Circle {
  Vec2 center;
  double radius = 0;
  std::string stroke = "#888";
  bool dashed = true;
};

struct Curve {
  std::vector<Vec2> pts;
  std::string stroke = "#1f4e9c";
  bool mirror = false;  // also draw (x, -y), for axisymmetric profiles
};

struct Scene {
  std::vector<Curve> curves;
  std::vector<Circle> circles;
  bool draw_axis = true;
  double width_px = 720;
  std::string title;
};

Curve profile_curve(const ProfileSurface& s, std::string stroke = "#1f4e9c");
std::string render(const Scene& scene);

}  // namespace imcf::svg
