#include "imcf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace imcf::svg {

namespace {

struct Box {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  void grow(Vec2 p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

Curve profile_curve(const ProfileSurface& s, std::string stroke) {
  Curve c;
  c.pts = s.pts;
  c.stroke = std::move(stroke);
  c.mirror = s.topology == Topology::AxisAnchored;
  return c;
}

std::string render(const Scene& scene) {
  Box box{1e300, -1e300, 1e300, -1e300};
  for (const auto& c : scene.curves)
    for (Vec2 p : c.pts) {
      box.grow(p);
      if (c.mirror) box.grow({p.x, -p.y});
    }
  for (const auto& c : scene.circles) {
    box.grow(c.center + Vec2{c.radius, c.radius});
    box.grow(c.center - Vec2{c.radius, c.radius});
  }
  if (box.x1 <= box.x0) box = {0, 1, 0, 1};
  double w = box.x1 - box.x0, h = box.y1 - box.y0;
  double pad = 0.05 * std::max(w, h);
  box.x0 -= pad, box.x1 += pad, box.y0 -= pad, box.y1 += pad;
  w = box.x1 - box.x0, h = box.y1 - box.y0;
  double scale = scene.width_px / w;
  double height_px = h * scale;

  // SVG y grows downward; flip about the box top.
  auto X = [&](double x) { return (x - box.x0) * scale; };
  auto Y = [&](double y) { return (box.y1 - y) * scale; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << num(scene.width_px) << "\" height=\"" << num(height_px)
      << "\" viewBox=\"0 0 " << num(scene.width_px) << ' ' << num(height_px)
      << "\">\n";
  if (!scene.title.empty())
    out << "  <title>" << scene.title << "</title>\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (scene.draw_axis && box.y0 < 0 && box.y1 > 0)
    out << "  <line x1=\"0\" y1=\"" << num(Y(0)) << "\" x2=\""
        << num(scene.width_px) << "\" y2=\"" << num(Y(0))
        << "\" stroke=\"#ccc\" stroke-width=\"1\"/>\n";
  for (const auto& c : scene.circles)
    out << "  <circle cx=\"" << num(X(c.center.x)) << "\" cy=\""
        << num(Y(c.center.y)) << "\" r=\"" << num(c.radius * scale)
        << "\" fill=\"none\" stroke=\"" << c.stroke << "\" stroke-width=\"1\""
        << (c.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
  for (const auto& c : scene.curves) {
    for (int pass = 0; pass < (c.mirror ? 2 : 1); ++pass) {
      double sign = pass == 0 ? 1.0 : -1.0;
      out << "  <polyline fill=\"none\" stroke=\"" << c.stroke
          << "\" stroke-width=\"1.5\""
          << (pass == 1 ? " stroke-opacity=\"0.5\"" : "") << " points=\"";
      for (std::size_t i = 0; i < c.pts.size(); ++i) {
        if (i) out << ' ';
        out << num(X(c.pts[i].x)) << ',' << num(Y(sign * c.pts[i].y));
      }
      out << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace imcf::svg
