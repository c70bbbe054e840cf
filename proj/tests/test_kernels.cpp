#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "imcf/kernels.hpp"

using namespace imcf;
using namespace imcf::kernels;

namespace {

std::vector<Vec2> random_cloud(std::size_t n, unsigned seed, double lo = -2.0,
                               double hi = 2.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vec2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

std::vector<Vec2> random_half_plane(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uf(0.0, 1.5);
  std::vector<Vec2> pts(n);
  for (auto& p : pts) p = {ux(rng), uf(rng)};
  return pts;
}

}  // namespace

TEST_CASE("max pairwise distance: parallel matches serial") {
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    auto pts = random_cloud(701, seed);
    PairResult a = max_pairwise_dist2(pts);
    PairResult b = max_pairwise_dist2_serial(pts);
    CHECK(a.value == b.value);
    CHECK(a.i == b.i);
    CHECK(a.j == b.j);
  }
}

TEST_CASE("max pairwise distance: square corners") {
  std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  PairResult r = max_pairwise_dist2(pts);
  CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("revolved max pairwise distance matches serial and brute force") {
  for (unsigned seed : {11u, 12u, 13u}) {
    auto pts = random_half_plane(463, seed);
    PairResult a = max_pairwise_dist2_rev(pts);
    PairResult b = max_pairwise_dist2_rev_serial(pts);
    CHECK(a.value == b.value);
    CHECK(a.i == b.i);
    CHECK(a.j == b.j);
    double brute = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i; j < pts.size(); ++j) {
        double dx = pts[i].x - pts[j].x, s = pts[i].y + pts[j].y;
        brute = std::max(brute, dx * dx + s * s);
      }
    CHECK(a.value == doctest::Approx(brute).epsilon(1e-15));
  }
}

TEST_CASE("revolved distance allows i = j (diametral pair on one latitude)") {
  std::vector<Vec2> pts = {{0.0, 3.0}, {1.0, 0.1}};
  PairResult r = max_pairwise_dist2_rev(pts);
  CHECK(r.i == 0);
  CHECK(r.j == 0);
  CHECK(r.value == doctest::Approx(36.0));
}

TEST_CASE("point-segment distance") {
  CHECK(dist_point_segment({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(dist_point_segment({3, 0}, {-1, 0}, {1, 0}) == doctest::Approx(2.0));
  CHECK(dist_point_segment({0, 0}, {0, 0}, {0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("segment-segment distance and crossing") {
  CHECK(dist_segment_segment({0, 0}, {1, 0}, {0, 1}, {1, 1}) ==
        doctest::Approx(1.0));
  CHECK(segments_cross({0, -1}, {0, 1}, {-1, 0}, {1, 0}));
  CHECK(!segments_cross({0, 1}, {1, 1}, {0, 0}, {1, 0}));
  // parallel overlapping
  CHECK(dist_segment_segment({0, 0}, {2, 0}, {1, 0}, {3, 0}) ==
        doctest::Approx(0.0));
}

TEST_CASE("close nonadjacent pair: hash matches brute force") {
  // pinched loop: two lobes almost touching at the waist
  std::vector<Vec2> pts;
  const std::size_t m = 400;
  for (std::size_t i = 0; i < m; ++i) {
    double th = 2 * M_PI * double(i) / double(m);
    double r = 1.0 + 0.96 * std::cos(2 * th);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  for (double tol : {1e-4, 0.05, 0.2}) {
    auto a = close_nonadjacent_pair(pts, true, tol);
    auto b = close_nonadjacent_pair_brute(pts, true, tol);
    auto c = close_nonadjacent_pair_brute_serial(pts, true, tol);
    REQUIRE(a.has_value() == b.has_value());
    REQUIRE(b.has_value() == c.has_value());
    if (a) {
      CHECK(*a == *b);
      CHECK(*b == *c);
    }
  }
}

TEST_CASE("close nonadjacent pair: clean circle has none") {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < 128; ++i) {
    double th = 2 * M_PI * double(i) / 128.0;
    pts.push_back({std::cos(th), std::sin(th)});
  }
  CHECK(!close_nonadjacent_pair(pts, true, 1e-3));
  // open polyline: wrap segments are genuinely nonadjacent, but a circle's
  // endpoints coincide, so a tolerance below the gap still finds nothing
  CHECK(!close_nonadjacent_pair(pts, false, 1e-3));
}

TEST_CASE("min distance between polylines: parallel matches serial") {
  for (unsigned seed : {5u, 6u}) {
    auto a = random_cloud(257, seed);
    auto b = random_cloud(263, seed + 100, 2.5, 6.0);
    double d1 = min_distance_polylines(a, b);
    double d2 = min_distance_polylines_serial(a, b);
    CHECK(d1 == d2);
    CHECK(polylines_touch(a, b, d1 + 1e-9));
    CHECK(!polylines_touch(a, b, d1 - 1e-9));
  }
}

TEST_CASE("min distance: concentric squares") {
  std::vector<Vec2> outer = {{-2, -2}, {2, -2}, {2, 2}, {-2, 2}, {-2, -2}};
  std::vector<Vec2> inner = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  CHECK(min_distance_polylines(outer, inner) == doctest::Approx(1.0));
  CHECK(min_distance_point_polyline({0, 0}, inner) == doctest::Approx(1.0));
}

TEST_CASE("Hausdorff distance: parallel matches serial, shifted circles") {
  std::vector<Vec2> a, b;
  for (std::size_t i = 0; i <= 512; ++i) {
    double th = 2 * M_PI * double(i) / 512.0;
    a.push_back({std::cos(th), std::sin(th)});
    b.push_back({std::cos(th) + 0.25, std::sin(th)});
  }
  double d1 = hausdorff_distance(a, b);
  double d2 = hausdorff_distance_serial(a, b);
  CHECK(d1 == d2);
  CHECK(d1 == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(hausdorff_distance(a, a) == doctest::Approx(0.0));
}

TEST_CASE("point in polygon: unit square and vertex grazing") {
  std::vector<Vec2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(point_in_polygon({0.5, 0.5}, sq));
  CHECK(!point_in_polygon({1.5, 0.5}, sq));
  CHECK(!point_in_polygon({-0.5, 1.0}, sq));  // ray through two vertices
}

TEST_CASE("rasterized region mask matches the polygon test") {
  std::vector<Vec2> poly;
  for (std::size_t i = 0; i < 200; ++i) {
    double th = 2 * M_PI * double(i) / 200.0;
    double r = 1.0 + 0.3 * std::sin(3 * th);
    poly.push_back({r * std::cos(th), r * std::sin(th)});
  }
  RegionMask mask = rasterize_polygon(poly, 400, 400, 0.05);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::size_t agree = 0, total = 0, boundary = 0;
  for (int k = 0; k < 4000; ++k) {
    Vec2 p{u(rng), u(rng)};
    bool exact = point_in_polygon(p, poly);
    bool coarse = mask.inside(p);
    double margin = 2 * std::hypot(mask.dx, mask.dy);
    // disagreement is allowed only within a couple of cells of the boundary
    double db = 1e300;
    for (std::size_t i = 0; i < poly.size(); ++i)
      db = std::min(db, dist_point_segment(p, poly[i],
                                           poly[(i + 1) % poly.size()]));
    ++total;
    if (db < margin) {
      ++boundary;
      continue;
    }
    agree += exact == coarse;
  }
  CHECK(agree == total - boundary);
  CHECK(total - boundary > 3000);  // the margin band must stay thin
}

TEST_CASE("mask lookup outside the padded box is false") {
  std::vector<Vec2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  RegionMask mask = rasterize_polygon(sq, 64, 64, 0.1);
  CHECK(!mask.inside({5, 5}));
  CHECK(!mask.inside({-5, 0.5}));
  CHECK(mask.inside({0.5, 0.5}));
}
