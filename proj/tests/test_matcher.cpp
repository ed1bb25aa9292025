#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "subpix/cover.hpp"
#include "subpix/errors.hpp"
#include "subpix/image.hpp"
#include "subpix/matcher.hpp"
#include "subpix/rng.hpp"
#include "subpix/transform.hpp"

using namespace subpix;

namespace {

BinaryImage2D random_binary(int n, std::uint64_t key) {
  BinaryImage2D m(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m.set(i, j, static_cast<std::uint8_t>(
                      uniform_below(key, static_cast<std::uint64_t>((i - 1) * n + j - 1), 2)));
  return m;
}

// m1(p) := m2(T p), zero where T p leaves the image; by construction the
// in-image pixels agree exactly, so distance_under(m1, m2, T) is the
// out-of-image mass alone.
BinaryImage2D pullback(const BinaryImage2D& m2, const AffineMap2D& map) {
  const int n = m2.n();
  BinaryImage2D m1(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const auto q = apply_image_affine(map, Pixel2{i, j}, n);
      m1.set(i, j, q ? m2.v(q->i, q->j) : 0);
    }
  return m1;
}

}  // namespace

TEST_CASE("exact distance on hand-checked binary cases") {
  const int n = 4;
  BinaryImage2D zeros(n), ones(n), board(n), board_inv(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      ones.set(i, j, 1);
      board.set(i, j, (i + j) % 2);
      board_inv.set(i, j, (i + j + 1) % 2);
    }
  CHECK(distance_under(zeros, zeros, AffineMap2D::identity()) == 0.0);
  CHECK(distance_under(board, board, AffineMap2D::identity()) == 0.0);
  CHECK(distance_under(board, board_inv, AffineMap2D::identity()) == 1.0);
  // every pixel lands outside
  CHECK(distance_under(ones, ones, AffineMap2D::translation(2 * n + 2, 2 * n + 2)) == 1.0);
  // half the rows leave under a half-image downward shift
  CHECK(distance_under(zeros, zeros, AffineMap2D::translation(n / 2, 0)) == 0.5);

  BinaryImage2D m1(2), m2(2);
  m1.set(1, 1, 1);
  m2.set(1, 2, 1);
  // (1,1)->(1,2) match, (2,1)->(2,2) match, column 2 leaves: 2 of 4 pixels
  CHECK(distance_under(m1, m2, AffineMap2D::translation(0, 1)) == 0.5);
}

TEST_CASE("exact distance is asymmetric") {
  const int n = 4;
  BinaryImage2D a(n), b(n);
  AffineMap2D half{Mat2::diag(0.5, 0.5), {0.0, 0.0}};
  AffineMap2D twice{Mat2::diag(2.0, 2.0), {0.0, 0.0}};
  // floor(i/2) = 0 exits for i = 1, so 7 of 16 pixels leave one way but
  // 12 of 16 leave the other way
  CHECK(distance_under(a, b, half) == doctest::Approx(7.0 / 16.0));
  CHECK(distance_under(b, a, twice) == doctest::Approx(12.0 / 16.0));
}

TEST_CASE("exact distance on grayscale values and value maps") {
  GrayImage2D m1(2), m2(2);
  m1.set(1, 1, 0.25);
  m1.set(1, 2, 0.5);
  m1.set(2, 1, 0.75);
  m1.set(2, 2, 1.0);
  m2.set(1, 1, 0.5);
  m2.set(1, 2, 0.5);
  m2.set(2, 1, 0.25);
  m2.set(2, 2, 0.0);
  CHECK(distance_under(m1, m2, AffineMap2D::identity()) == doctest::Approx(0.4375));
  const IntensityMap l{0.5, 0.25};
  CHECK(distance_under(m1, m2, AffineMap2D::identity(), l) == doctest::Approx(0.34375));
}

TEST_CASE("exact distance on volumes distinguishes exits from depth clamping") {
  const int n = 3;
  BinaryImage3D m1(n), m2(n);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        m1.set(i, j, k, 1);
        m2.set(i, j, k, k == n ? 1 : 0);
      }
  // a full-affine shift in depth sends every voxel outside
  CHECK(distance_under(m1, m2, AffineMap3D::translation(0, 0, n)) == 1.0);
  // the planar-plus-depth family truncates depth instead, landing on slice n
  RestrictedMap3D truncated;
  truncated.zshift = n;
  CHECK(distance_under(m1, m2, truncated) == 0.0);
  CHECK(distance_under(m1, m1, RestrictedMap3D{}) == 0.0);
}

TEST_CASE("sampling budgets follow their formulas") {
  CHECK(samples_per_estimate(0.1) == 200);
  CHECK(samples_per_estimate(0.05) == 800);
  CHECK(samples_per_estimate(0.5) == 8);
  CHECK(samples_per_estimate(0.3) == 23);
  CHECK_THROWS_AS(samples_per_estimate(0.0), std::invalid_argument);
  CHECK_THROWS_AS(samples_per_estimate(1.0), std::invalid_argument);
  CHECK_THROWS_AS(samples_per_estimate(-0.1), std::invalid_argument);

  CHECK(median_repetitions(1) == 1);
  CHECK(median_repetitions(256) == 17);
  CHECK(median_repetitions(5184) == 27);
  CHECK_THROWS_AS(median_repetitions(0), std::invalid_argument);

  CHECK(general_sample_count(64, 0.1) == 106865);
  CHECK(general_sample_count(2, 0.5) == 36);  // ceil(8 ln 3 / 0.25)
  CHECK_THROWS_AS(general_sample_count(1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(general_sample_count(64, 0.0), std::invalid_argument);
}

TEST_CASE("one estimate reads exactly two pixels per sample") {
  const int n = 8;
  const BinaryImage2D img = random_binary(n, split_key(61, 0));
  const BinaryImage2D other = random_binary(n, split_key(61, 1));
  MeteredImage<BinaryImage2D> v1(img), v2(other);
  const double est = estimate_distance_single(v1, v2, AffineMap2D::identity(), 0.1, 7);
  CHECK(v1.reads() == 200);
  CHECK(v2.reads() == 200);
  CHECK(est >= 0.0);
  CHECK(est <= 1.0);
  // out-of-image samples still read (and discard) one clamped pixel
  MeteredImage<BinaryImage2D> w1(img), w2(other);
  const double out_est =
      estimate_distance_single(w1, w2, AffineMap2D::translation(3 * n, 3 * n), 0.1, 7);
  CHECK(out_est == 1.0);
  CHECK(w1.reads() == 200);
  CHECK(w2.reads() == 200);
}

TEST_CASE("estimates are deterministic in the key and vary across keys") {
  const int n = 16;
  const BinaryImage2D a = random_binary(n, split_key(67, 0));
  const BinaryImage2D b = random_binary(n, split_key(67, 1));
  MeteredImage<BinaryImage2D> v1(a), v2(b);
  const AffineMap2D map = AffineMap2D::translation(1, -2);
  const double e1 = estimate_distance_single(v1, v2, map, 0.2, 99);
  const double e2 = estimate_distance_single(v1, v2, map, 0.2, 99);
  const double e3 = estimate_distance_single(v1, v2, map, 0.2, 100);
  CHECK(e1 == e2);
  CHECK(e1 != e3);  // 50 samples of a near-half mismatch rate collide rarely
}

TEST_CASE("median amplification bumps even repetition counts to odd") {
  const int n = 8;
  const BinaryImage2D a = random_binary(n, split_key(71, 0));
  const BinaryImage2D b = random_binary(n, split_key(71, 1));
  MeteredImage<BinaryImage2D> v1(a), v2(b);
  estimate_distance_median(v1, v2, AffineMap2D::identity(), 0.1, 4, 5);
  CHECK(v1.reads() == 5 * 200);  // 4 rounds up to 5
  MeteredImage<BinaryImage2D> w1(a), w2(b);
  estimate_distance_median(w1, w2, AffineMap2D::identity(), 0.1, 1, 5);
  CHECK(w1.reads() == 200);
}

TEST_CASE("estimates concentrate around the exact distance") {
  const int n = 16;
  int good = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const std::uint64_t key = split_key(73, trial);
    const BinaryImage2D a = random_binary(n, split_key(key, 0));
    const BinaryImage2D b = random_binary(n, split_key(key, 1));
    const AffineMap2D map = AffineMap2D::translation(
        static_cast<double>(uniform_below(key, 0, 5)) - 2.0,
        static_cast<double>(uniform_below(key, 1, 5)) - 2.0);
    const double exact = distance_under(a, b, map);
    MeteredImage<BinaryImage2D> v1(a), v2(b);
    const double est = estimate_distance_median(v1, v2, map, 0.2, 9, split_key(key, 2));
    if (std::abs(est - exact) <= 0.2) ++good;
  }
  CHECK(good >= 47);
}

TEST_CASE("cover search finds a planted translation and meters its reads") {
  const int n = 16;
  const CoverParams p{n, 0.5, 2.0};
  const Cover2D cover = build_cover_2d(p, Family2D::kTranslation);
  REQUIRE(cover.size() == 256);
  const CoverMember2D planted = cover.member(7 * 16 + 8);
  const BinaryImage2D m2 = random_binary(n, split_key(79, 0));
  const BinaryImage2D m1 = pullback(m2, planted.map);
  const double exact = distance_under(m1, m2, planted.map);
  CHECK(exact < 0.25);  // only the out-of-image band differs

  EstimatorParams params;
  params.epsilon = 0.1;
  params.seed = 5;
  const MatchResult2D r = match_smooth(m1, m2, cover, params);
  CHECK(r.distance <= exact + 0.1);
  CHECK(r.cover_index < cover.size());
  // the reported estimate stays near the true distance of the returned map
  CHECK(std::abs(r.distance - distance_under(m1, m2, r.map)) <= 0.1);
  // read counts are a pure function of the search plan
  CHECK(r.stats.candidates == 256);
  CHECK(r.stats.repetitions == 17);
  CHECK(r.stats.samples_per_estimate == 200);
  CHECK(r.stats.reads_m1 == 256ull * 17 * 200);
  CHECK(r.stats.reads_m2 == 256ull * 17 * 200);
  CHECK(r.stats.queries() == 2ull * 256 * 17 * 200);
}

TEST_CASE("cover search results do not depend on the worker count") {
  const int n = 16;
  const CoverParams p{n, 0.5, 2.0};
  const Cover2D cover = build_cover_2d(p, Family2D::kTranslation);
  const BinaryImage2D m2 = random_binary(n, split_key(83, 0));
  const BinaryImage2D m1 = pullback(m2, cover.member(100).map);
  EstimatorParams one;
  one.epsilon = 0.15;
  one.seed = 11;
  EstimatorParams four = one;
  four.workers = 4;
  const MatchResult2D r1 = match_smooth(m1, m2, cover, one);
  const MatchResult2D r4 = match_smooth(m1, m2, cover, four);
  CHECK(r1.cover_index == r4.cover_index);
  CHECK(r1.distance == r4.distance);
  CHECK(r1.stats.reads_m1 == r4.stats.reads_m1);
  CHECK(r1.stats.reads_m2 == r4.stats.reads_m2);
}

TEST_CASE("explicit repetition counts override the derived plan") {
  const int n = 8;
  const Cover2D cover = build_cover_2d({n, 1.0, 2.0}, Family2D::kTranslation);
  const BinaryImage2D m1 = random_binary(n, split_key(89, 0));
  const BinaryImage2D m2 = random_binary(n, split_key(89, 1));
  EstimatorParams params;
  params.epsilon = 0.5;
  params.repetitions = 3;
  const MatchResult2D r = match_smooth(m1, m2, cover, params);
  CHECK(r.stats.repetitions == 3);
  CHECK(r.stats.reads_m1 == cover.size() * 3ull * 8);
}

TEST_CASE("cover search works on grayscale images") {
  const int n = 8;
  const Cover2D cover = build_cover_2d({n, 1.0, 2.0}, Family2D::kTranslation);
  GrayImage2D m(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m.set(i, j, ((i + j) % 3) / 2.0);
  EstimatorParams params;
  params.epsilon = 0.2;
  params.seed = 3;
  const MatchResult2D r = match_smooth(m, m, cover, params);
  // the identity member scores zero mismatch on identical images
  CHECK(r.distance <= 0.05);
  CHECK(distance_under(m, m, r.map) <= 0.1);
}

TEST_CASE("restricted volume search recovers a planted depth shift") {
  const int n = 6;
  const CoverParams p{n, 1.2, 2.0};
  const Cover3DRestricted cover = build_cover_3d_restricted(p, Family2D::kIdentity);
  BinaryImage3D m2(n);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        m2.set(i, j, k, static_cast<std::uint8_t>(
                            uniform_below(split_key(97, 0),
                                          static_cast<std::uint64_t>(((k - 1) * n + i - 1) * n + j - 1),
                                          2)));
  // plant a pure depth translation by one slice
  RestrictedMap3D planted;
  planted.zshift = 1.0;
  BinaryImage3D m1(n);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        const auto q = apply_restricted_3d(planted, Pixel3{i, j, k}, n);
        m1.set(i, j, k, q ? m2.v(q->i, q->j, q->k) : 0);
      }
  const double exact = distance_under(m1, m2, planted);
  CHECK(exact == 0.0);  // depth truncation keeps every voxel in range
  EstimatorParams params;
  params.epsilon = 0.15;
  params.seed = 17;
  const MatchResultRestricted3D r = match_smooth_3d(m1, m2, cover, params);
  CHECK(r.distance <= 0.15);
  CHECK(distance_under(m1, m2, r.map) <= 0.3);
  CHECK(r.stats.reads_m1 ==
        cover.size() * static_cast<std::uint64_t>(r.stats.repetitions) *
            r.stats.samples_per_estimate);
}

TEST_CASE("sample-first matcher recovers a planted integer translation") {
  const int n = 16;
  const BinaryImage2D m2 = random_binary(n, split_key(101, 0));
  const AffineMap2D planted = AffineMap2D::translation(3, -2);
  const BinaryImage2D m1 = pullback(m2, planted);
  const std::vector<AffineMap2D> candidates = {
      AffineMap2D::identity(), planted, AffineMap2D::translation(-5, 4)};
  GeneralParams params;
  params.epsilon = 0.3;
  params.seed = 23;
  const GeneralResult r = match_general(m1, m2, candidates, params);
  CHECK_FALSE(r.all_discarded);
  CHECK(r.candidate_index == 1);
  CHECK(r.sample_count == general_sample_count(n, params.epsilon));
  CHECK(r.reads_m1 == r.sample_count);
  CHECK(r.reads_m2 == r.sample_count);
  const double exact = distance_under(m1, m2, planted);
  CHECK(std::abs(r.distance - exact) <= 0.3);

  GeneralParams strict = params;
  strict.strict_objective = true;
  const GeneralResult rs = match_general(m1, m2, candidates, strict);
  CHECK_FALSE(rs.all_discarded);
  CHECK(rs.candidate_index == 1);
}

TEST_CASE("sample-first matcher discards collision-free maps") {
  const int n = 16;
  const BinaryImage2D m1 = random_binary(n, split_key(103, 0));
  const BinaryImage2D m2 = random_binary(n, split_key(103, 1));
  const std::vector<AffineMap2D> candidates = {
      AffineMap2D::translation(2 * n + 2, 2 * n + 2)};
  GeneralParams params;
  params.epsilon = 0.3;
  params.seed = 29;
  const GeneralResult r = match_general(m1, m2, candidates, params);
  CHECK(r.all_discarded);
  CHECK(r.discarded == 1);
  CHECK(r.candidate_index == candidates.size());
  CHECK(r.distance == 1.0);
  // the sentinel map sends every pixel out of the image
  CHECK(distance_under(m1, m2, r.map) == 1.0);
  // reads happen during sampling, before any candidate is scored
  CHECK(r.reads_m1 == r.sample_count);

  CHECK_THROWS_AS(match_general(m1, m2, {}, params), std::invalid_argument);
}

TEST_CASE("sample-first matcher breaks ties to the lowest index") {
  const int n = 8;
  const BinaryImage2D m2 = random_binary(n, split_key(107, 0));
  const BinaryImage2D m1 = pullback(m2, AffineMap2D::identity());
  const std::vector<AffineMap2D> twins = {AffineMap2D::identity(),
                                          AffineMap2D::identity()};
  GeneralParams params;
  params.epsilon = 0.4;
  params.seed = 31;
  const GeneralResult r = match_general(m1, m2, twins, params);
  CHECK(r.candidate_index == 0);
  GeneralParams wide = params;
  wide.workers = 4;
  const GeneralResult rw = match_general(m1, m2, twins, wide);
  CHECK(rw.candidate_index == 0);
  CHECK(rw.distance == r.distance);
}

TEST_CASE("exhaustive search agrees with a direct scan of the members") {
  const int n = 8;
  const Cover2D cover = build_cover_2d({n, 1.0, 2.0}, Family2D::kTranslation);
  const BinaryImage2D m2 = random_binary(n, split_key(109, 0));
  const BinaryImage2D m1 = pullback(m2, cover.member(cover.size() / 3).map);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_idx = 0;
  for (const CoverMember2D& m : cover.materialize()) {
    const double d = distance_under(m1, m2, m.map);
    if (d < best) {
      best = d;
      best_idx = m.index;
    }
  }
  const ExhaustiveResult2D r = exhaustive_min_distance(m1, m2, cover);
  CHECK(r.cover_index == best_idx);
  CHECK(r.distance == best);
  const ExhaustiveResult2D r3 = exhaustive_min_distance(m1, m2, cover, kDefaultWorkCap, 3);
  CHECK(r3.cover_index == best_idx);
  CHECK(r3.distance == best);
  // 81 members * 64 pixels exceeds a 1000-evaluation budget
  CHECK_THROWS_AS(exhaustive_min_distance(m1, m2, cover, 1000.0), CapacityError);
}

TEST_CASE("grayscale exhaustive search scans planar and value maps together") {
  const int n = 8;
  const CoverParams p{n, 1.2, 2.0};
  const Cover3DRestricted cover = build_cover_3d_restricted(p, Family2D::kIdentity);
  GrayImage2D m1(n), m2(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const double v = ((i - 1) * n + (j - 1)) / (2.0 * n * n);
      m2.set(i, j, v);
      m1.set(i, j, std::min(1.0, 0.5 * v + 0.25));
    }
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_idx = 0;
  for (std::uint64_t idx = 0; idx < cover.size(); ++idx) {
    const RestrictedMap3D member = cover.member(idx).map;
    const IntensityMap l{member.zscale, member.zshift / n};
    const double d = distance_under(m1, m2, member.planar, l);
    if (d < best) {
      best = d;
      best_idx = idx;
    }
  }
  const ExhaustiveResultGray r = exhaustive_min_distance_gray(m1, m2, cover);
  CHECK(r.cover_index == best_idx);
  CHECK(r.distance == best);
  CHECK(r.intensity.con == cover.member(best_idx).map.zscale);
  CHECK(r.intensity.bri == doctest::Approx(cover.member(best_idx).map.zshift / n));
}

TEST_CASE("volume exhaustive search agrees with a direct scan") {
  const int n = 4;
  const CoverParams p{n, 1.2, 2.0};
  const Cover3DRestricted cover = build_cover_3d_restricted(p, Family2D::kIdentity);
  BinaryImage3D m1(n), m2(n);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        m2.set(i, j, k, (i + j + k) % 2);
        m1.set(i, j, k, (i + j + k + 1) % 2);
      }
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_idx = 0;
  for (std::uint64_t idx = 0; idx < cover.size(); ++idx) {
    const double d = distance_under(m1, m2, cover.member(idx).map);
    if (d < best) {
      best = d;
      best_idx = idx;
    }
  }
  const ExhaustiveResultRestricted3D r = exhaustive_min_distance(m1, m2, cover);
  CHECK(r.cover_index == best_idx);
  CHECK(r.distance == best);
}

TEST_CASE("matchers validate their inputs") {
  BinaryImage2D a(4), b(8);
  CHECK_THROWS_AS(distance_under(a, b, AffineMap2D::identity()), std::invalid_argument);
  const Cover2D cover = build_cover_2d({8, 1.0, 2.0}, Family2D::kTranslation);
  BinaryImage2D c(8);
  EstimatorParams params;
  CHECK_THROWS_AS(match_smooth(a, a, cover, params), std::invalid_argument);
  params.epsilon = 0.0;
  CHECK_THROWS_AS(match_smooth(c, c, cover, params), std::invalid_argument);
  MeteredImage<BinaryImage2D> v1(a), v2(b);
  CHECK_THROWS_AS(estimate_distance_single(v1, v2, AffineMap2D::identity(), 0.1, 0),
                  std::invalid_argument);
}
