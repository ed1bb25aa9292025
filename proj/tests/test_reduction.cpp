#include <cmath>
#include <limits>

#include "doctest.h"
#include "subpix/cover.hpp"
#include "subpix/errors.hpp"
#include "subpix/image.hpp"
#include "subpix/matcher.hpp"
#include "subpix/reduction.hpp"
#include "subpix/rng.hpp"
#include "subpix/transform.hpp"

using namespace subpix;

namespace {

// values quantized to multiples of 1/n, so column heights are exact
GrayImage2D random_quantized(int n, std::uint64_t key) {
  GrayImage2D m(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const auto steps =
          uniform_below(key, static_cast<std::uint64_t>((i - 1) * n + j - 1),
                        static_cast<std::uint64_t>(n) + 1);
      m.set(i, j, static_cast<double>(steps) / n);
    }
  return m;
}

}  // namespace

TEST_CASE("column heights follow the level-set rule") {
  CHECK(column_ones(0.0, 4) == 0);
  CHECK(column_ones(0.249, 4) == 0);
  CHECK(column_ones(0.25, 4) == 1);
  CHECK(column_ones(0.5, 4) == 2);
  CHECK(column_ones(0.74, 4) == 2);
  CHECK(column_ones(0.75, 4) == 3);
  CHECK(column_ones(1.0, 4) == 4);
  CHECK(column_ones(1.0, 7) == 7);
}

TEST_CASE("the level-set volume is monotone and matches the rule voxelwise") {
  const int n = 5;
  GrayImage2D m(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m.set(i, j, uniform01(113, static_cast<std::uint64_t>((i - 1) * n + j - 1)));
  const BinaryImage3D vol = reduce_to_3d(m);
  REQUIRE(vol.n() == n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      int ones = 0;
      bool seen_zero = false;
      for (int k = 1; k <= n; ++k) {
        const bool expected = m.v(i, j) >= static_cast<double>(k) / n;
        CHECK(vol.v(i, j, k) == (expected ? 1 : 0));
        if (vol.v(i, j, k)) {
          CHECK_FALSE(seen_zero);  // no voxel above a gap
          ++ones;
        } else {
          seen_zero = true;
        }
      }
      CHECK(ones == column_ones(m.v(i, j), n));
    }
}

TEST_CASE("lifting a planar map and value map lands in the depth family") {
  const AffineMap2D map = AffineMap2D::translation(2, -1);
  const IntensityMap l{1.5, 0.25};
  const RestrictedMap3D lifted = lift_transform(map, l, 8);
  CHECK(lifted.planar.t.x == 2.0);
  CHECK(lifted.planar.t.y == -1.0);
  CHECK(lifted.zscale == 1.5);
  CHECK(lifted.zshift == doctest::Approx(2.0));  // 0.25 * 8
  CHECK_THROWS_AS(lift_transform(map, l, 1), std::invalid_argument);
}

TEST_CASE("value doubling of a quarter level matches in both spaces") {
  const int n = 4;
  GrayImage2D m1(n), m2(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      m1.set(i, j, 0.5);
      m2.set(i, j, 0.25);
    }
  const ConsistencyReport r =
      reduction_consistency(m1, m2, AffineMap2D::identity(), IntensityMap{2.0, 0.0});
  CHECK(r.gray == 0.0);
  CHECK(r.vol == 0.0);
  CHECK(r.gap == 0.0);
}

TEST_CASE("value-space and column-space distances stay within one level") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const std::uint64_t key = split_key(127, trial);
    const int n = 8;
    const GrayImage2D m1 = random_quantized(n, split_key(key, 0));
    const GrayImage2D m2 = random_quantized(n, split_key(key, 1));
    const IntensityMap l{0.5 + uniform01(key, 0) * 1.5, -0.25 + uniform01(key, 1) * 0.75};
    const AffineMap2D map = AffineMap2D::translation(
        static_cast<double>(uniform_below(key, 2, 5)) - 2.0,
        static_cast<double>(uniform_below(key, 3, 5)) - 2.0);
    const ConsistencyReport r = reduction_consistency(m1, m2, map, l);
    CHECK(r.gap <= 1.0 / n + 1e-12);
    CHECK(r.gray >= 0.0);
    CHECK(r.vol >= 0.0);
    CHECK(r.gray <= 1.0);
    CHECK(r.vol <= 1.0);
  }
}

TEST_CASE("both exhaustive searches agree up to one quantization level") {
  const int n = 8;
  const CoverParams p{n, 1.2, 2.0};
  const Cover3DRestricted cover = build_cover_3d_restricted(p, Family2D::kIdentity);
  const GrayImage2D m1 = random_quantized(n, split_key(131, 0));
  const GrayImage2D m2 = random_quantized(n, split_key(131, 1));
  const ExhaustiveResultGray direct = exhaustive_min_distance_gray(m1, m2, cover);
  const ExhaustiveResultGray reduced = exhaustive_min_column_distance(m1, m2, cover);
  CHECK(std::abs(direct.distance - reduced.distance) <= 1.0 / n + 1e-12);
  // worker count changes nothing
  const ExhaustiveResultGray rw = exhaustive_min_column_distance(m1, m2, cover, kDefaultWorkCap, 3);
  CHECK(rw.cover_index == reduced.cover_index);
  CHECK(rw.distance == reduced.distance);
  CHECK_THROWS_AS(exhaustive_min_column_distance(m1, m2, cover, 100.0), CapacityError);
}

TEST_CASE("grayscale cover search recovers a planted value map exactly") {
  const int n = 8;
  const CoverParams p{n, 1.0, 2.0};
  const Cover3DRestricted cover = build_cover_3d_restricted(p, Family2D::kIdentity);
  // plant the value map on the grid by snapping a nearby target
  RestrictedMap3D probe;
  probe.zscale = 1.3;
  probe.zshift = 0.4;
  const RestrictedMap3D planted = cover.snap(probe).map;
  const IntensityMap l{planted.zscale, planted.zshift / n};
  const GrayImage2D m2 = random_quantized(n, split_key(137, 0));
  GrayImage2D m1(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m1.set(i, j, apply_intensity(l, m2.v(i, j)));
  REQUIRE(distance_under(m1, m2, AffineMap2D::identity(), l) == 0.0);

  EstimatorParams params;
  params.epsilon = 0.2;
  params.seed = 43;
  const GrayMatchResult r = match_grayscale(m1, m2, cover, params);
  CHECK(r.distance == 0.0);
  CHECK(distance_under(m1, m2, r.map, r.intensity) <= 0.1);
  CHECK(r.stats.candidates == cover.size());
  CHECK(r.stats.reads_m1 ==
        cover.size() * static_cast<std::uint64_t>(r.stats.repetitions) *
            r.stats.samples_per_estimate);
  CHECK(r.stats.reads_m2 == r.stats.reads_m1);

  EstimatorParams wide = params;
  wide.workers = 4;
  const GrayMatchResult rw = match_grayscale(m1, m2, cover, wide);
  CHECK(rw.cover_index == r.cover_index);
  CHECK(rw.distance == r.distance);
  CHECK(rw.stats.reads_m1 == r.stats.reads_m1);
}

TEST_CASE("identity candidates make both sides of the reduction coincide") {
  const int n = 6;
  const GrayImage2D m = random_quantized(n, split_key(139, 0));
  const ConsistencyReport r =
      reduction_consistency(m, m, AffineMap2D::identity(), IntensityMap{});
  CHECK(r.gray == 0.0);
  CHECK(r.vol == 0.0);
}

TEST_CASE("reduction interfaces validate their inputs") {
  GrayImage2D a(4), b(8);
  CHECK_THROWS_AS(reduction_consistency(a, b, AffineMap2D::identity(), IntensityMap{}),
                  std::invalid_argument);
  const Cover3DRestricted cover = build_cover_3d_restricted({8, 1.0, 2.0}, Family2D::kIdentity);
  CHECK_THROWS_AS(match_grayscale(a, a, cover, EstimatorParams{}), std::invalid_argument);
}
