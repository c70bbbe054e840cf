#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "imcf/constructions.hpp"
#include "imcf/diagnostics.hpp"
#include "imcf/errors.hpp"
#include "imcf/geometry.hpp"

using namespace imcf;

namespace {

// Independent oracle: solve the 3x3 boundary-value system
//   p(e) = g, p'(e) = g', p''(e) = g''  for p = A x^3 + B x^4 + C x^5
// by Gaussian elimination with partial pivoting.
std::array<double, 3> solve_quintic_bc(double g, double g1, double g2,
                                       double e) {
  double M[3][4] = {
      {e * e * e, e * e * e * e, e * e * e * e * e, g},
      {3 * e * e, 4 * e * e * e, 5 * e * e * e * e, g1},
      {6 * e, 12 * e * e, 20 * e * e * e, g2},
  };
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    for (int k = 0; k < 4; ++k) std::swap(M[c][k], M[piv][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      double f = M[r][c] / M[c][c];
      for (int k = c; k < 4; ++k) M[r][k] -= f * M[c][k];
    }
  }
  return {M[0][3] / M[0][0], M[1][3] / M[1][1], M[2][3] / M[2][2]};
}

}  // namespace

TEST_CASE("quintic coefficients match the linear-solve oracle (1000 draws)") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ug(-5.0, 5.0), ue(0.05, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double g = ug(rng), g1 = ug(rng), g2 = ug(rng), e = ue(rng);
    QuinticCoeffs q = quintic_c2_coefficients(g, g1, g2, e);
    auto ref = solve_quintic_bc(g, g1, g2, e);
    const double scale =
        std::max({1.0, std::abs(ref[0]), std::abs(ref[1]), std::abs(ref[2])});
    CHECK(std::abs(q.A - ref[0]) / scale < 1e-12);
    CHECK(std::abs(q.B - ref[1]) / scale < 1e-12);
    CHECK(std::abs(q.C - ref[2]) / scale < 1e-12);
    // boundary-condition residuals
    CHECK(std::abs(q.eval(e) - g) < 1e-10);
    CHECK(std::abs(q.d1(e) - g1) < 1e-10);
    CHECK(std::abs(q.d2(e) - g2) < 1e-10);
    // vanishes to second order at 0 by form
    CHECK(q.eval(0) == 0);
    CHECK(q.d1(0) == 0);
    CHECK(q.d2(0) == 0);
  }
}

TEST_CASE("quintic boundary-value determinant is 2 eps^9") {
  for (double e : {0.1, 0.5, 0.8, 2.0}) {
    // cofactor expansion of the 3x3 system matrix, done longhand
    const double e2 = e * e, e3 = e2 * e, e4 = e3 * e, e5 = e4 * e;
    const double det =
        e3 * (4 * e3 * 20 * e3 - 5 * e4 * 12 * e2) -
        e4 * (3 * e2 * 20 * e3 - 5 * e4 * 6 * e) +
        e5 * (3 * e2 * 12 * e2 - 4 * e3 * 6 * e);
    CHECK(std::abs(det - 2 * std::pow(e, 9)) / std::pow(e, 9) < 1e-12);
    CHECK(std::abs(quintic_matrix_det(e) - det) / det < 1e-12);
  }
  CHECK_THROWS_AS(quintic_matrix_det(0.0), DegenerateInterval);
  CHECK_THROWS_AS(quintic_c2_coefficients(1, 1, 1, -0.5), DegenerateInterval);
}

TEST_CASE("worked bell-glue value: A = 4/(e r) - R^2/(2 e r^3)") {
  // data (0, -4/3, -125/27) at eps = 0.8 comes from R = 1, r = 0.6
  const double R = 1.0, r = 0.6, e = 0.8;
  QuinticCoeffs q =
      quintic_c2_coefficients(0.0, -4.0 / 3.0, -125.0 / 27.0, e);
  const double closed_form = 4 / (e * r) - R * R / (2 * e * r * r * r);
  CHECK(q.A == doctest::Approx(closed_form).epsilon(1e-12));
  CHECK(q.A == doctest::Approx(5.43981481481).epsilon(1e-10));
}

TEST_CASE("default dumbbell: C2 junction jumps within budget") {
  NeckAssembly na = assemble_neck(default_dumbbell());
  CHECK(!na.arc_fallback);
  auto xs = na.junctions();
  CHECK(xs.size() == 6);
  for (double xj : xs) {
    auto J = junction_jumps(na, xj, 1e-3);
    CHECK(J[0] < 1e-6);
    CHECK(J[1] < 1e-5);
    CHECK(J[2] < 1e-3);
  }
}

TEST_CASE("default dumbbell: mean-convexity certificates") {
  DumbbellSpec spec = default_dumbbell();
  NeckAssembly na = assemble_neck(spec);
  NeckCertificates cert = neck_certificates(na);
  CHECK(cert.max_p_pp_bell_glue < 1.0);
  CHECK(cert.max_pp_turn_glues <= 1.0 / spec.r);
  CHECK(cert.min_H > 0.0);
  CHECK(cert.pass(spec.r));
  // the H infimum sits on the bell/cone junction circle, where H = 1/R
  CHECK(cert.min_H == doctest::Approx(1.0 / spec.R).epsilon(1e-6));
}

TEST_CASE("default dumbbell: assembled profile") {
  DumbbellSpec spec = default_dumbbell();
  ProfileSurface s = build_dumbbell(spec);
  CHECK(s.n == 2);
  CHECK(s.sample_count() == spec.m);
  CHECK(!self_intersects(s));
  // mirror symmetry of the sampled profile
  ProfileSurface r = reflected_x(s, 0.0);
  for (std::size_t i = 0; i < s.pts.size(); ++i) {
    CHECK(s.pts[i].x == doctest::Approx(r.pts[i].x).epsilon(1e-9));
    CHECK(s.pts[i].y == doctest::Approx(r.pts[i].y).epsilon(1e-9));
  }
  CHECK(diameter(s) == doctest::Approx(2 * (spec.p1() + spec.R)).epsilon(1e-6));
  CHECK(inradius(s) == doctest::Approx(spec.R).epsilon(1e-3));
  auto H = mean_curvature(s);
  for (double v : H) CHECK(v > 0);
}

TEST_CASE("tight-neck parameters are rejected as not mean-convex") {
  // a fat waist (r = 0.2) with a d = 0.1 gap leaves no room for a
  // mean-convex descent; the assembler falls back to a circular arc whose
  // bottom has H < 0 and the build reports the offending sample
  DumbbellSpec spec;
  spec.d = 0.1;
  spec.r = 0.2;
  spec.eps_I_II = 0.04;
  spec.eps_II_III = 0.02;
  spec.eps_III_IV = 0.01;
  CHECK_THROWS_AS(build_dumbbell(spec), NotMeanConvex);
  // waist nearly as fat as the bells: same verdict
  DumbbellSpec fat = default_dumbbell();
  fat.r = 0.99;
  CHECK_THROWS_AS(build_dumbbell(fat), NotMeanConvex);
}

TEST_CASE("gluing zones that collide throw GluingOverlap") {
  DumbbellSpec spec = default_dumbbell();
  spec.eps_III_IV = 0.1;  // waist abscissa is only ~0.037
  CHECK_THROWS_AS(assemble_neck(spec), GluingOverlap);
  DumbbellSpec spec2 = default_dumbbell();
  spec2.eps_II_III = 0.2;  // cone extent is only ~0.146
  CHECK_THROWS_AS(assemble_neck(spec2), GluingOverlap);
}

TEST_CASE("DumbbellSpec validation") {
  CHECK_NOTHROW(validate(default_dumbbell()));
  DumbbellSpec s;
  s.r = 1.5;
  CHECK_THROWS_AS(validate(s), InvalidParams);  // r >= R
  s = {};
  s.d = 0;
  CHECK_THROWS_AS(validate(s), InvalidParams);
  s = {};
  s.R_star = 0.01;
  CHECK_THROWS_AS(validate(s), InvalidParams);  // R_star <= r
  s = {};
  s.junction_beta = 2.0;
  CHECK_THROWS_AS(validate(s), InvalidParams);
  s = {};
  s.turn_margin = 1.0;
  CHECK_THROWS_AS(validate(s), InvalidParams);
  s = {};
  s.eps_I_II = 2.0;  // > sqrt(R^2 - r^2)
  CHECK_THROWS_AS(validate(s), InvalidParams);
}

TEST_CASE("auto_epsilon: idempotent on the default spec") {
  DumbbellSpec once = auto_epsilon(default_dumbbell());
  DumbbellSpec twice = auto_epsilon(once);
  CHECK(once.eps_I_II == doctest::Approx(twice.eps_I_II).epsilon(1e-15));
  CHECK(once.eps_II_III == doctest::Approx(twice.eps_II_III).epsilon(1e-15));
  CHECK(once.eps_III_IV == doctest::Approx(twice.eps_III_IV).epsilon(1e-15));
  CHECK_NOTHROW(build_dumbbell(once));
}

TEST_CASE("auto_epsilon succeeds on the tight-neck example params") {
  // the glue lengths can always be chosen against the bridge geometry even
  // when the neck layout itself is infeasible
  DumbbellSpec spec;
  spec.d = 0.1;
  spec.r = 0.2;
  DumbbellSpec fixed = auto_epsilon(spec);
  CHECK(fixed.eps_I_II > 0);
  CHECK(fixed.eps_I_II <= std::sqrt(1 - 0.04) + 1e-15);
}

TEST_CASE("auto_epsilon: separated balls have no bridge to aim at") {
  DumbbellSpec spec = default_dumbbell();
  spec.d = 5.0;
  CHECK_THROWS_AS(auto_epsilon(spec), CannotSatisfy);
}

TEST_CASE("bean curve (n = 1) is positively curved, hence star-shaped") {
  ProfileSurface b = build_bean(1, 512);
  auto H = mean_curvature(b);
  for (double v : H) CHECK(v > 0);
  // a closed plane curve with kappa > 0 is convex, so it is star-shaped
  // from any interior point; the waiting-time criterion bites through the
  // outside-ball clause instead
  StarReport sr = is_star_shaped(b, diameter_info(b).midpoint());
  CHECK(sr.star_shaped);
  CHECK(sr.max_crossings == 1);
}

TEST_CASE("bean surface (n = 2) is mean-convex and not star-shaped") {
  ProfileSurface b = build_bean(2, 1024);
  CHECK(b.n == 2);
  auto H = mean_curvature(b);
  for (double v : H) CHECK(v > 0);
  StarReport sr = is_star_shaped(b, diameter_info(b).midpoint());
  CHECK(!sr.star_shaped);
  CHECK(sr.max_crossings >= 3);
}

TEST_CASE("capsule measures") {
  ProfileSurface s = build_capsule(0.5, 1.0, 512);
  const double want = 2 * M_PI * 0.5 * 2.0 + 4 * M_PI * 0.25;
  CHECK(area(s) == doctest::Approx(want).epsilon(1e-3));
  CHECK(diameter(s) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(inradius(s) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("builder parameter guards") {
  CHECK_THROWS_AS(build_circle(-1.0, 64), InvalidParams);
  CHECK_THROWS_AS(build_circle(1.0, 4), InvalidParams);
  CHECK_THROWS_AS(build_sphere(0.0, 64), InvalidParams);
  CHECK_THROWS_AS(build_torus(0.5, 2.0, 64), InvalidParams);  // a <= b
  CHECK_THROWS_AS(build_ellipse(1.0, 1.0, 3, 64), InvalidParams);
  CHECK_THROWS_AS(build_bean(3, 512), InvalidParams);
  CHECK_THROWS_AS(build_capsule(1.0, -1.0, 64), InvalidParams);
}
