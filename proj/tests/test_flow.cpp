#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "imcf/constructions.hpp"
#include "imcf/errors.hpp"
#include "imcf/flow.hpp"
#include "imcf/geometry.hpp"
#include "imcf/kernels.hpp"

using namespace imcf;

namespace {

double max_radius(const ProfileSurface& s, Vec2 c = {0, 0}) {
  double r = 0;
  for (const Vec2& p : s.pts) r = std::max(r, dist(p, c));
  return r;
}

double min_radius(const ProfileSurface& s, Vec2 c = {0, 0}) {
  double r = 1e300;
  for (const Vec2& p : s.pts) r = std::min(r, dist(p, c));
  return r;
}

double worst_area_law(const FlowTrajectory& tr) {
  const double A0 = tr.frames.front().diag.area;
  double worst = 0;
  for (const auto& fr : tr.frames)
    worst = std::max(worst,
                     std::abs(fr.diag.area / (std::exp(fr.t) * A0) - 1));
  return worst;
}

}  // namespace

TEST_CASE("stable_dt scales with h^2 and is enforced by step") {
  ProfileSurface coarse = build_circle(1.0, 128);
  ProfileSurface fine = build_circle(1.0, 256);
  double d1 = stable_dt(coarse, 0.25), d2 = stable_dt(fine, 0.25);
  CHECK(d1 > 0);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK_NOTHROW(step(fine, d2));
  CHECK_THROWS_AS(step(fine, 100 * d2), StabilityViolation);
}

TEST_CASE("circle flow matches R e^t") {
  ProfileSurface s = build_circle(1.0, 512);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  FlowTrajectory tr = run(s, cfg);
  CHECK(tr.event.kind == FlowEventKind::Completed);
  CHECK(tr.event.t_event == doctest::Approx(1.0));
  CHECK(tr.frames.front().t == 0.0);
  const double want = std::exp(1.0);
  CHECK(max_radius(tr.frames.back().surface) / want - 1 ==
        doctest::Approx(0.0).epsilon(1e-4));
  CHECK(min_radius(tr.frames.back().surface) / want - 1 ==
        doctest::Approx(0.0).epsilon(1e-4));
  CHECK(worst_area_law(tr) < 1e-3);
  // frames recorded on the requested cadence, times increasing
  for (std::size_t i = 1; i < tr.frames.size(); ++i)
    CHECK(tr.frames[i].t > tr.frames[i - 1].t);
}

TEST_CASE("sphere flow matches R e^{t/2}") {
  ProfileSurface s = build_sphere(1.0, 256);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  FlowTrajectory tr = run(s, cfg);
  CHECK(tr.event.kind == FlowEventKind::Completed);
  const double want = std::exp(0.5);
  CHECK(max_radius(tr.frames.back().surface) / want - 1 ==
        doctest::Approx(0.0).epsilon(1e-4));
  CHECK(worst_area_law(tr) < 1e-3);
  // diagnostics carried on frames
  for (const auto& fr : tr.frames) {
    CHECK(fr.diag.embedded);
    CHECK(fr.diag.min_H > 0);
    CHECK(fr.diag.max_H >= fr.diag.min_H);
  }
}

TEST_CASE("radial-graph scheme matches the closed form and the parametric") {
  RadialGraph g;
  g.n = 1;
  g.r.assign(256, 1.0);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  FlowTrajectory tr = run_radial_graph(g, cfg);
  CHECK(tr.event.kind == FlowEventKind::Completed);
  for (const Vec2& p : tr.frames.back().surface.pts)
    CHECK(norm(p) == doctest::Approx(std::exp(1.0)).epsilon(1e-4));

  // cross-scheme agreement on an eccentric star-shaped oval
  ProfileSurface oval = build_bean(1, 256);
  FlowTrajectory tp = run(oval, cfg);
  RadialGraph og = to_radial_graph(oval, diameter_info(oval).midpoint(), 256);
  FlowTrajectory tg = run_radial_graph(og, cfg);
  REQUIRE(tp.event.kind == FlowEventKind::Completed);
  REQUIRE(tg.event.kind == FlowEventKind::Completed);
  double hd = kernels::hausdorff_distance(tp.frames.back().surface.pts,
                                          tg.frames.back().surface.pts);
  CHECK(hd < 5e-3);
}

TEST_CASE("torus pinches: singularity event with monotone min H") {
  ProfileSurface s = build_torus(2.0, 0.25, 256);
  FlowConfig cfg;
  cfg.t_end = 12.0;
  cfg.record_every = 0.05;
  FlowTrajectory tr = run(s, cfg);
  CHECK(tr.event.kind == FlowEventKind::SingularityDetected);
  CHECK(tr.event.t_event < 4 * std::log(18.0));
  CHECK(!tr.event.detail.empty());
  for (std::size_t i = 1; i < tr.frames.size(); ++i)
    CHECK(tr.frames[i].diag.min_H <= tr.frames[i - 1].diag.min_H + 1e-12);
}

TEST_CASE("dumbbell neck stops the flow before the waiting-time deadline") {
  DumbbellSpec spec = default_dumbbell();
  spec.m = 512;
  ProfileSurface s = build_dumbbell(spec);
  FlowConfig cfg;
  cfg.t_end = 8.0;
  FlowTrajectory tr = run(s, cfg);
  const bool stopped = tr.event.kind == FlowEventKind::SingularityDetected ||
                       tr.event.kind == FlowEventKind::SelfIntersection;
  CHECK(stopped);
  CHECK(tr.event.t_event < 1.0);
}

TEST_CASE("max_steps cap stops cleanly") {
  ProfileSurface s = build_circle(1.0, 128);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  cfg.max_steps = 10;
  FlowTrajectory tr = run(s, cfg);
  CHECK(tr.event.kind == FlowEventKind::StoppedMaxSteps);
  CHECK(tr.frames.back().t < 1.0);
}

TEST_CASE("event kind names") {
  CHECK(to_string(FlowEventKind::Completed) == "completed");
  CHECK(to_string(FlowEventKind::SingularityDetected) ==
        "singularity_detected");
  CHECK(to_string(FlowEventKind::SelfIntersection) == "self_intersection");
  CHECK(to_string(FlowEventKind::StoppedMaxSteps) == "stopped_max_steps");
}

TEST_CASE("two flowed spheres first touch at the radius-sum crossing") {
  const double R1 = 1.0, R2 = 0.8, sep = 4.4;
  ProfileSurface a = build_sphere(R1, 192, -sep / 2);
  ProfileSurface b = build_sphere(R2, 192, +sep / 2);
  FlowConfig cfg;
  cfg.t_end = 2.2;
  cfg.record_every = 0.005;
  FlowTrajectory ta = run(a, cfg), tb = run(b, cfg);
  REQUIRE(ta.frames.size() == tb.frames.size());
  double t_report = -1;
  for (std::size_t i = 0; i < ta.frames.size(); ++i) {
    if (kernels::polylines_touch(ta.frames[i].surface.pts,
                                 tb.frames[i].surface.pts, 1e-9)) {
      t_report = ta.frames[i].t;
      break;
    }
  }
  const double t_exact = 2 * std::log(sep / (R1 + R2));
  REQUIRE(t_report >= 0);
  CHECK(std::abs(t_report - t_exact) <= 2 * cfg.record_every + 1e-9);
}

TEST_CASE("arrival time on a sphere annulus is a level-set solution") {
  ProfileSurface s = build_sphere(1.0, 256);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  FlowTrajectory tr = run(s, cfg);
  ResidualStats rs = arrival_time_residual(tr, 96);
  CHECK(rs.cells > 500);
  CHECK(rs.max_residual < 0.1);
  CHECK(rs.mean_residual < rs.max_residual);
  CHECK(rs.t_first == doctest::Approx(0.0));
  CHECK(rs.t_last == doctest::Approx(1.0));
}

TEST_CASE("overlapping sweeps are rejected as NotFoliated") {
  ProfileSurface a = build_sphere(1.0, 128, -0.5);
  ProfileSurface b = build_sphere(1.0, 128, +0.5);
  FlowConfig cfg;
  cfg.t_end = 0.8;
  FlowTrajectory ta = run(a, cfg), tb = run(b, cfg);
  std::vector<const FlowTrajectory*> both = {&ta, &tb};
  CHECK_THROWS_AS(arrival_time_residual(both, 96), NotFoliated);
}

TEST_CASE("avoidance: nested spheres keep separating") {
  ProfileSurface outer = build_circle(2.0, 256);
  ProfileSurface inner = build_circle(1.0, 256);
  FlowConfig cfg;
  cfg.t_end = 1.0;
  FlowTrajectory to_ = run(outer, cfg), ti = run(inner, cfg);
  AvoidanceReport ar = avoidance_check(to_, ti);
  CHECK(ar.contained_all);
  CHECK(ar.min_increment > 0);  // ell(t) = (e^t (R - r))^2 strictly grows
  CHECK(ar.entries.front().ell ==
        doctest::Approx(1.0).epsilon(1e-3));  // (2 - 1)^2
}

TEST_CASE("avoidance requires the inner surface strictly inside") {
  ProfileSurface outer = build_circle(1.0, 128);
  ProfileSurface inner = build_circle(1.0, 128, {0.5, 0});  // pokes out
  FlowConfig cfg;
  cfg.t_end = 0.2;
  FlowTrajectory to_ = run(outer, cfg), ti = run(inner, cfg);
  CHECK_THROWS_AS(avoidance_check(to_, ti), PreconditionViolated);
}
