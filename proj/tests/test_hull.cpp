#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "imcf/constructions.hpp"
#include "imcf/errors.hpp"
#include "imcf/hull.hpp"

using namespace imcf;

namespace {

double cosh_residual(const BridgeProfile& b) {
  double res = 0;
  for (const Vec2& p : b.f)
    res = std::max(res,
                   std::abs(p.y - b.c * std::cosh((p.x - b.b) / b.c)));
  return res;
}

}  // namespace

TEST_CASE("symmetric bridge: catenoid between equal balls at d = 0.1") {
  auto b = minimal_bridge(1.0, 1.0, 0.1, 2);
  REQUIRE(b.has_value());
  CHECK(b->n == 2);
  // mirror symmetry: equal attach latitudes, catenoid centered at x = 0
  CHECK(b->attach_left == doctest::Approx(b->attach_right).epsilon(1e-10));
  CHECK(std::abs(b->b) < 1e-10);
  CHECK(b->x_left == doctest::Approx(-b->x_right).epsilon(1e-9));
  // minimality: interior mean curvature vanishes
  CHECK(std::abs(b->max_interior_H) < 1e-8);
  // closed form f = c cosh((x - b)/c)
  CHECK(cosh_residual(*b) < 1e-6);
  // the bridge stays inside the cylinder of radius R and the slab [-p1, p1]
  const double p1 = 1.0 + 0.05;
  for (const Vec2& p : b->f) {
    CHECK(p.y <= 1.0 + 1e-12);
    CHECK(p.y > 0);
    CHECK(std::abs(p.x) <= p1);
  }
}

TEST_CASE("asymmetric bridge: different radii still shoot to tangency") {
  auto b = minimal_bridge(1.0, 0.7, 0.1, 2);
  REQUIRE(b.has_value());
  CHECK(b->attach_left != doctest::Approx(b->attach_right).epsilon(1e-3));
  CHECK(std::abs(b->b) > 1e-3);  // catenoid waist shifted toward the small ball
  CHECK(std::abs(b->max_interior_H) < 1e-8);
  CHECK(cosh_residual(*b) < 1e-6);
}

TEST_CASE("no tangent bridge between distant balls") {
  CHECK(!minimal_bridge(1.0, 1.0, 5.0, 2).has_value());
  CHECK(!minimal_bridge(1.0, 1.0, 0.5, 2).has_value());
}

TEST_CASE("close balls are not outward minimizing") {
  HullResult h = hull_two_balls(1.0, 0.05, 2);
  CHECK(h.margin < 0);
  CHECK(!h.is_outward_minimizing);
  CHECK(!h.is_strictly);
  REQUIRE(h.bridge.has_value());
  CHECK(h.extent_ok);
  CHECK(h.cylinder_ok);
  CHECK(h.body_area == doctest::Approx(8 * M_PI).epsilon(1e-9));
  CHECK(h.hull_area < h.body_area);
}

TEST_CASE("near-threshold margin regression value") {
  HullResult h = hull_two_balls(1.0, 0.31, 2);
  CHECK(h.margin == doctest::Approx(-0.030053).epsilon(0.05));
  CHECK(!h.is_outward_minimizing);
}

TEST_CASE("distant balls: no bridge, trivially minimizing") {
  HullResult h = hull_two_balls(1.0, 0.5, 2);
  CHECK(!h.bridge.has_value());
  CHECK(h.margin == 0.0);
  CHECK(h.is_outward_minimizing);
  CHECK(h.is_strictly);
  CHECK_THROWS_AS(hull_two_balls(1.0, 0.1, 1), InvalidParams);
}

TEST_CASE("margin sign-change distance d*(R = 1, n = 2): baseline") {
  // regression baseline frozen at first computation, bracketed to 1e-3
  const double dstar = margin_threshold(1.0, 2, 0.01, 1.0, 1e-3);
  CHECK(std::abs(dstar - 0.31986) <= 2e-3);
  CHECK_THROWS_AS(margin_threshold(1.0, 2, 0.5, 1.0, 1e-3), InvalidParams);
}

TEST_CASE("dumbbell hull audit: bridge clears the modified zone") {
  HullResult a = audit_dumbbell_hull(default_dumbbell());
  REQUIRE(a.bridge.has_value());
  CHECK(a.clearance > 0.03);
  // bell gap d = 0.31 sits below d*, so the dumbbell is not outward
  // minimizing: bridging the neck strictly shrinks the area
  CHECK(a.margin < 0);
  CHECK(!a.is_strictly);
  CHECK(!a.is_outward_minimizing);
  CHECK(a.margin == doctest::Approx(-0.090).epsilon(0.1));
}

TEST_CASE("dumbbell hull audit: oversized glue touches the bridge") {
  DumbbellSpec spec = default_dumbbell();
  spec.eps_I_II = 0.3;  // extends past the bridge attach circle
  CHECK_THROWS_AS(audit_dumbbell_hull(spec), HullTouched);
}

TEST_CASE("convexity certificate") {
  CHECK(convex_certificate(build_circle(1.0, 256)));
  CHECK(convex_certificate(build_bean(1, 256)));  // positively curved oval
  CHECK(convex_certificate(build_sphere(1.0, 256)));
  CHECK(convex_certificate(build_ellipse(1.3, 0.8, 2, 256)));
  CHECK(!convex_certificate(build_dumbbell(default_dumbbell())));
  CHECK(!convex_certificate(build_torus(2.0, 0.5, 256)));
}
