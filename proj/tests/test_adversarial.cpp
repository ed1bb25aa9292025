#include <cmath>
#include <limits>

#include "doctest.h"
#include "subpix/adversarial.hpp"
#include "subpix/image.hpp"
#include "subpix/matcher.hpp"
#include "subpix/rng.hpp"
#include "subpix/transform.hpp"

using namespace subpix;

namespace {

double brute_translation_min(const BinaryImage2D& m1, const BinaryImage2D& m2, int radius) {
  double best = 1.0;
  for (int si = -radius; si <= radius; ++si)
    for (int sj = -radius; sj <= radius; ++sj)
      best = std::min(best, distance_under(m1, m2, AffineMap2D::translation(si, sj)));
  return best;
}

bool block_constant(const BinaryImage2D& m, int k) {
  const int n = m.n();
  for (int bi = 0; bi < n / k; ++bi)
    for (int bj = 0; bj < n / k; ++bj) {
      const std::uint8_t v = m.v(bi * k + 1, bj * k + 1);
      for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j)
          if (m.v(bi * k + i, bj * k + j) != v) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("generator parameters validate") {
  CHECK_THROWS_AS(gen_d1({0, 1, 5}), std::invalid_argument);
  CHECK_THROWS_AS(gen_d1({7, 2, 5}), std::invalid_argument);   // k does not divide n
  CHECK_THROWS_AS(gen_d1({8, 0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(gen_d1({8, -2, 5}), std::invalid_argument);
  CHECK_THROWS_AS(gen_d2_with_shift({16, 2, 5}, 3, 0), std::invalid_argument);  // off-block
  CHECK_THROWS_AS(gen_d2_with_shift({16, 2, 5}, -2, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_d2_with_shift({16, 2, 5}, 0, 18), std::invalid_argument);
}

TEST_CASE("independent pairs are deterministic and block-constant") {
  const AdversarialParams p{16, 4, 99};
  const ImagePair a = gen_d1(p);
  const ImagePair b = gen_d1(p);
  CHECK(a.m1.raw() == b.m1.raw());
  CHECK(a.m2.raw() == b.m2.raw());
  const ImagePair c = gen_d1({16, 4, 100});
  CHECK(a.m1.raw() != c.m1.raw());
  CHECK(block_constant(a.m1, 4));
  CHECK(block_constant(a.m2, 4));
  // the two images of a pair are distinct streams
  CHECK(a.m1.raw() != a.m2.raw());
}

TEST_CASE("block values behave like fair coins") {
  const int n = 64, k = 2;
  const ImagePair pair = gen_d1({n, k, 7});
  int ones = 0;
  for (int bi = 0; bi < n / k; ++bi)
    for (int bj = 0; bj < n / k; ++bj) ones += pair.m1.v(bi * k + 1, bj * k + 1);
  const double mean = static_cast<double>(ones) / ((n / k) * (n / k));
  CHECK(mean > 0.45);
  CHECK(mean < 0.55);
}

TEST_CASE("a block spanning the whole image yields constant images") {
  const ImagePair pair = gen_d1({8, 8, 3});
  for (int i = 1; i <= 8; ++i)
    for (int j = 1; j <= 8; ++j) {
      CHECK(pair.m1.v(i, j) == pair.m1.v(1, 1));
      CHECK(pair.m2.v(i, j) == pair.m2.v(1, 1));
    }
}

TEST_CASE("planted pairs copy the shifted overlap exactly") {
  const AdversarialParams p{32, 2, 11};
  const PlantedPair pair = gen_d2(p);
  CHECK(pair.s_h >= 0);
  CHECK(pair.s_v >= 0);
  CHECK(pair.s_h % 2 == 0);
  CHECK(pair.s_v % 2 == 0);
  CHECK(pair.s_h <= 32 / 8);
  CHECK(pair.s_v <= 32 / 8);
  for (int i = pair.s_h + 1; i <= 32; ++i)
    for (int j = pair.s_v + 1; j <= 32; ++j)
      CHECK(pair.m2.v(i, j) == pair.m1.v(i - pair.s_h, j - pair.s_v));
  CHECK(block_constant(pair.m2, 2));

  const double expected =
      1.0 - static_cast<double>((32 - pair.s_h) * (32 - pair.s_v)) / (32.0 * 32.0);
  const double planted =
      distance_under(pair.m1, pair.m2, AffineMap2D::translation(pair.s_h, pair.s_v));
  CHECK(planted == expected);
  CHECK(planted <= 15.0 / 64.0);
}

TEST_CASE("a zero planted shift duplicates the first image") {
  const PlantedPair pair = gen_d2_with_shift({16, 2, 21}, 0, 0);
  CHECK(pair.m1.raw() == pair.m2.raw());
  CHECK(distance_under(pair.m1, pair.m2, AffineMap2D::identity()) == 0.0);
}

TEST_CASE("packed translation search equals the brute-force scan") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 8;
    BinaryImage2D m1(n), m2(n);
    const std::uint64_t key = split_key(149, seed);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        m1.set(i, j, static_cast<std::uint8_t>(
                         uniform_below(split_key(key, 0),
                                       static_cast<std::uint64_t>((i - 1) * n + j - 1), 2)));
        m2.set(i, j, static_cast<std::uint8_t>(
                         uniform_below(split_key(key, 1),
                                       static_cast<std::uint64_t>((i - 1) * n + j - 1), 2)));
      }
    for (int radius : {0, 1, 3, 7}) {
      CHECK(min_translation_distance(m1, m2, radius) ==
            brute_translation_min(m1, m2, radius));
    }
  }
  // word-boundary sizes
  for (int n : {63, 64, 65}) {
    BinaryImage2D m1(n), m2(n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        m1.set(i, j, static_cast<std::uint8_t>(uniform_below(151, static_cast<std::uint64_t>(i * n + j), 2)));
        m2.set(i, j, static_cast<std::uint8_t>(uniform_below(157, static_cast<std::uint64_t>(i * n + j), 2)));
      }
    CHECK(min_translation_distance(m1, m2, 2) == brute_translation_min(m1, m2, 2));
  }
}

TEST_CASE("the packed search certifies the planted shift") {
  const PlantedPair pair = gen_d2({32, 2, 31});
  const double planted =
      distance_under(pair.m1, pair.m2, AffineMap2D::translation(pair.s_h, pair.s_v));
  const double found = min_translation_distance(pair.m1, pair.m2, 32 / 8);
  CHECK(found <= planted);
  CHECK(found == brute_translation_min(pair.m1, pair.m2, 32 / 8));
}

TEST_CASE("independent pairs keep every translation far away") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ImagePair pair = gen_d1({64, 1, seed});
    const int radius = static_cast<int>(std::ceil(0.4 * 64));
    CHECK(min_translation_distance(pair.m1, pair.m2, radius) > 0.4);
  }
}

TEST_CASE("the separation experiment splits the two families") {
  const std::vector<SeparationRow> rows =
      separation_experiment({32}, 2, 0.25, {1, 2});
  REQUIRE(rows.size() == 4);
  int d1_rows = 0, d2_rows = 0;
  for (const SeparationRow& row : rows) {
    CHECK(row.n == 32);
    CHECK(row.queries > 0);
    if (row.family == "d1") {
      ++d1_rows;
      CHECK(row.s_h == -1);
      CHECK(row.s_v == -1);
      CHECK(row.exhaustive_distance > 0.35);
      CHECK(row.matcher_distance > 0.3);
    } else {
      REQUIRE(row.family == "d2");
      ++d2_rows;
      CHECK(row.s_h >= 0);
      CHECK(row.s_v >= 0);
      CHECK(row.planted_distance <= 15.0 / 64.0);
      CHECK(row.exhaustive_distance <= row.planted_distance);
      CHECK(row.matcher_distance <= row.planted_distance + 2.0 * 0.25);
    }
  }
  CHECK(d1_rows == 2);
  CHECK(d2_rows == 2);
  // deterministic given seeds
  const std::vector<SeparationRow> again = separation_experiment({32}, 2, 0.25, {1, 2});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CHECK(rows[r].matcher_distance == again[r].matcher_distance);
    CHECK(rows[r].exhaustive_distance == again[r].exhaustive_distance);
    CHECK(rows[r].queries == again[r].queries);
  }
}
