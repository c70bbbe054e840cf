#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "imcf/constructions.hpp"
#include "imcf/diagnostics.hpp"
#include "imcf/errors.hpp"
#include "imcf/flow.hpp"
#include "imcf/geometry.hpp"

using namespace imcf;

TEST_CASE("unit ball admissibility matches the reflection picture") {
  // reflecting the region below <x, nu> = lambda across the plane must land
  // inside the region: for a centered ball that holds iff lambda <= 0
  for (int n : {1, 2}) {
    ProfileSurface s =
        n == 1 ? build_circle(1.0, 256) : build_sphere(1.0, 256);
    auto lo = is_admissible(s, {{1, 0}, -0.5});
    CHECK(lo.admissible);
    CHECK(lo.violation == doctest::Approx(0.0));
    auto mid = is_admissible(s, {{1, 0}, 0.0});
    CHECK(mid.admissible);
    auto hi = is_admissible(s, {{1, 0}, 0.5});
    CHECK(!hi.admissible);
    CHECK(hi.violation > 0.9);  // reflected cap pokes ~2*lambda outside
    // oblique direction, n = 1 only (n = 2 planes carry an axis normal
    // representative by rotational symmetry)
    if (n == 1) {
      Vec2 nu = normalized({1, 1});
      CHECK(is_admissible(s, {nu, -0.25}).admissible);
      CHECK(!is_admissible(s, {nu, 0.25}).admissible);
    }
  }
}

TEST_CASE("admissibility tolerance defaults to the sample step") {
  ProfileSurface s = build_circle(1.0, 256);
  // a sliver violation below h passes at the default tolerance but fails at
  // a stingier one
  auto rep = is_admissible(s, {{1, 0}, s.h / 4});
  CHECK(rep.admissible);
  auto strict = is_admissible(s, {{1, 0}, s.h / 4}, 1e-9);
  CHECK(!strict.admissible);
  CHECK(strict.violation > 1e-9);
  CHECK(strict.violation < 2 * s.h);
}

TEST_CASE("reflection profile of centered bodies is flat at zero") {
  ProfileSurface ball = build_sphere(1.0, 256);
  ReflectionProfile rp = reflection_profile(ball, 16);
  CHECK(rp.directions.size() == 16);
  CHECK(rp.lambda_max.size() == 16);
  CHECK(rp.Lambda <= ball.h / 4 + 1e-12);
  CHECK(rp.origin.x == doctest::Approx(0.0).epsilon(1e-9));
  for (double lm : rp.lambda_max) CHECK(std::abs(lm) <= ball.h);

  ProfileSurface disc = build_circle(1.0, 256);
  ReflectionProfile rd = reflection_profile(disc, 64);
  CHECK(rd.Lambda <= disc.h / 4 + 1e-12);
}

TEST_CASE("reflection profile recenters at the diameter midpoint") {
  ProfileSurface off = build_sphere(1.0, 256, 0.3);
  ReflectionProfile rp = reflection_profile(off, 16);
  CHECK(rp.origin.x == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(rp.Lambda <= off.h / 4 + 1e-12);  // a round ball is centered again

  // in absolute coordinates the same ball needs Lambda = |c|: bisect the
  // admissibility threshold per direction by hand
  double Labs = 0;
  for (int k = 0; k < 8; ++k) {
    const double th = M_PI * double(k) / 7.0;
    Vec2 nu{std::cos(th), std::sin(th)};
    double lo = -2.5, hi = 2.5;
    while (hi - lo > off.h / 4) {
      const double m = 0.5 * (lo + hi);
      if (is_admissible(off, {nu, m}).admissible)
        lo = m;
      else
        hi = m;
    }
    Labs = std::max(Labs, -lo);
  }
  CHECK(Labs == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("star-shapedness: balls, eccentric centers, torus") {
  ProfileSurface c = build_circle(1.0, 256);
  StarReport sr = is_star_shaped(c, {0, 0});
  CHECK(sr.star_shaped);
  CHECK(sr.max_crossings == 1);
  CHECK(sr.min_support == doctest::Approx(1.0).epsilon(1e-6));
  StarReport off = is_star_shaped(c, {0.6, 0.2});
  CHECK(off.star_shaped);
  CHECK(off.min_support < 1.0);
  CHECK(off.min_support > 0.0);
  CHECK_THROWS_AS(is_star_shaped(c, {2.0, 0.0}), CenterOutside);

  ProfileSurface t = build_torus(2.0, 0.5, 512);
  CHECK_THROWS_AS(is_star_shaped(t, {0, 0}), CenterOutside);  // hole
  StarReport tube = is_star_shaped(t, {0, 2.0});
  CHECK(!tube.star_shaped);
  CHECK(tube.max_crossings >= 3);
}

TEST_CASE("sphere is star-shaped from any interior axis point") {
  ProfileSurface s = build_sphere(1.0, 256);
  CHECK(is_star_shaped(s, {0, 0}).star_shaped);
  CHECK(is_star_shaped(s, {0.7, 0}).star_shaped);
}

TEST_CASE("waiting-time deadline t*") {
  CHECK(t_star(2.0, 1.0, 1) == doctest::Approx(std::log(2.0)));
  CHECK(t_star(2.0, 1.0, 2) == doctest::Approx(2 * std::log(2.0)));
  CHECK(t_star(4.5, 0.25, 2) == doctest::Approx(2 * std::log(18.0)));
  // scale invariance: measured diam / inradius is homogeneous of degree 0
  CHECK(t_star(build_circle(1.0, 256)) ==
        doctest::Approx(t_star(build_circle(3.0, 256))).epsilon(1e-9));
  CHECK(t_star(build_sphere(1.0, 256)) ==
        doctest::Approx(2 * std::log(2.0)).epsilon(1e-3));
  CHECK_THROWS_AS(t_star(1.5, 1.0, 1), InvalidGeometry);  // diam < 2R
  CHECK_THROWS_AS(t_star(2.0, 0.0, 1), InvalidGeometry);
}

TEST_CASE("first_star_time is zero on sphere-started trajectories") {
  ProfileSurface s = build_sphere(1.0, 128);
  FlowConfig cfg;
  cfg.t_end = 0.2;
  FlowTrajectory tr = run(s, cfg);
  auto t = first_star_time(tr);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(0.0));
}

TEST_CASE("first_star_time: torus trajectories never qualify") {
  ProfileSurface s = build_torus(2.0, 0.25, 192);
  FlowConfig cfg;
  cfg.t_end = 0.4;
  cfg.record_every = 0.05;
  FlowTrajectory tr = run(s, cfg);
  CHECK(!first_star_time(tr).has_value());
}

TEST_CASE("gradient audit: centered spheres have zero slack") {
  ProfileSurface ball = build_sphere(1.0, 256);
  GradientAudit ga = gradient_estimate_audit(ball, 0.0, {0, 0}, 0.9);
  CHECK(ga.max_slack <= 1e-12);
  CHECK(ga.audited == ball.sample_count());
  CHECK(ga.skipped == 0);
}

TEST_CASE("gradient audit: shifted circle obeys the Lambda bound") {
  // circle of radius 1 about (0.3, 0) has polar slope bounded by
  // r Lambda / sqrt(r^2 - Lambda^2) with Lambda = |c| = 0.3
  ProfileSurface off = build_circle(1.0, 512, {0.3, 0});
  GradientAudit ga = gradient_estimate_audit(off, 0.3, {0, 0}, 0.8);
  CHECK(ga.max_slack <= 1e-9);
  CHECK(ga.audited > 0);
}

TEST_CASE("gradient audit skips samples under the Lambda horizon") {
  ProfileSurface c = build_circle(1.0, 256);
  GradientAudit ga = gradient_estimate_audit(c, 1.2, {0, 0}, 0.5);
  CHECK(ga.audited == 0);
  CHECK(ga.skipped == c.sample_count());
}

TEST_CASE("gradient audit rejects non-graph data") {
  ProfileSurface t = build_torus(2.0, 0.5, 512);
  CHECK_THROWS_AS(gradient_estimate_audit(t, 0.0, {0, 2.0}, 0.1), NotAGraph);
}

TEST_CASE("containment monitor brackets the exponential annulus") {
  ProfileSurface c = build_circle(1.0, 256);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  FlowTrajectory tr = run(c, cfg);
  ContainmentReport cr = containment_monitor(tr, {0, 0}, 1.0, {0, 0}, 2.0);
  CHECK(cr.max_inner_slack <= c.h);
  CHECK(cr.max_outer_slack <= c.h);
  for (const auto& fr : cr.frames) {
    CHECK(fr.inner_ok);
    CHECK(fr.outer_ok);
  }
  // the flow covers B_{diam^2/(2R)} = B_2 at t = ln 2
  REQUIRE(cr.escape_time.has_value());
  CHECK(*cr.escape_time == doctest::Approx(std::log(2.0)).epsilon(0.05));
}

TEST_CASE("containment monitor reports violations without throwing") {
  ProfileSurface c = build_circle(1.0, 128);
  FlowConfig cfg;
  cfg.t_end = 0.3;
  FlowTrajectory tr = run(c, cfg);
  // inner radius deliberately too fat: B_{1.5 e^t} cannot fit inside e^t
  ContainmentReport cr = containment_monitor(tr, {0, 0}, 1.5, {0, 0}, 2.0);
  CHECK(cr.max_inner_slack > 0.4);
  CHECK(!cr.frames.front().inner_ok);
}
