// Benchmarks the OpenMP-parallel kernels against their serial references and
// cross-checks that both return identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "imcf/geometry.hpp"
#include "imcf/kernels.hpp"

using namespace imcf;

namespace {

std::vector<Vec2> noisy_loop(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2 * M_PI * i / n;
    const double r = 1.0 + 0.3 * std::cos(2 * th) + jitter(rng);
    pts[i] = {r * std::cos(th), r * std::sin(th)};
  }
  return pts;
}

std::vector<Vec2> half_plane(std::size_t n, std::uint32_t seed) {
  auto pts = noisy_loop(n, seed);
  for (Vec2& p : pts) p.y = std::abs(p.y) + 0.01;
  return pts;
}

template <typename Fn>
double time_best_ms(Fn&& fn, int reps = 3) {
  using clock = std::chrono::steady_clock;
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    fn();
    const std::chrono::duration<double, std::milli> dt = clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

int failures = 0;

void report(const std::string& name, std::size_t n, double serial_ms,
            double parallel_ms, bool same) {
  std::printf("%-28s n=%-7zu serial %9.2f ms   parallel %9.2f ms   x%.2f   %s\n",
              name.c_str(), n, serial_ms, parallel_ms,
              serial_ms / parallel_ms, same ? "match" : "MISMATCH");
  if (!same) ++failures;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t scale = 1;
  if (argc > 1) scale = std::max(1L, std::atol(argv[1]));

  for (std::size_t n : {4000 * scale, 20000 * scale}) {
    const auto loop = noisy_loop(n, 7);
    const auto half = half_plane(n, 11);
    const auto other = noisy_loop(n, 23);

    kernels::PairResult ps, pp;
    report("max_pairwise_dist2", n,
           time_best_ms([&] { ps = kernels::max_pairwise_dist2_serial(loop); }),
           time_best_ms([&] { pp = kernels::max_pairwise_dist2(loop); }),
           ps.value == pp.value && ps.i == pp.i && ps.j == pp.j);

    report("max_pairwise_dist2_rev", n,
           time_best_ms(
               [&] { ps = kernels::max_pairwise_dist2_rev_serial(half); }),
           time_best_ms([&] { pp = kernels::max_pairwise_dist2_rev(half); }),
           ps.value == pp.value && ps.i == pp.i && ps.j == pp.j);

    std::optional<std::pair<std::size_t, std::size_t>> cs, cp;
    const double tol = 0.02;
    report("close_nonadjacent_brute", n,
           time_best_ms([&] {
             cs = kernels::close_nonadjacent_pair_brute_serial(loop, true, tol);
           }),
           time_best_ms([&] {
             cp = kernels::close_nonadjacent_pair_brute(loop, true, tol);
           }),
           cs == cp);

    std::optional<std::pair<std::size_t, std::size_t>> ch;
    const double hash_ms = time_best_ms(
        [&] { ch = kernels::close_nonadjacent_pair(loop, true, tol); });
    std::printf("%-28s n=%-7zu spatial hash %6.2f ms   %s\n",
                "close_nonadjacent_pair", n, hash_ms,
                ch == cs ? "match" : "MISMATCH");
    if (ch != cs) ++failures;

    double ds = 0, dp = 0;
    report("min_distance_polylines", n,
           time_best_ms(
               [&] { ds = kernels::min_distance_polylines_serial(loop, other); }),
           time_best_ms(
               [&] { dp = kernels::min_distance_polylines(loop, other); }),
           ds == dp);

    report("hausdorff_distance", n,
           time_best_ms(
               [&] { ds = kernels::hausdorff_distance_serial(loop, other); }),
           time_best_ms([&] { dp = kernels::hausdorff_distance(loop, other); }),
           ds == dp);
    std::printf("\n");
  }
  if (failures) std::printf("%d kernel mismatches\n", failures);
  return failures ? 1 : 0;
}
