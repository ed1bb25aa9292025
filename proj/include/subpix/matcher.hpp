#pragma once

#include <cstdint>
#include <vector>

#include "subpix/cover.hpp"
#include "subpix/image.hpp"
#include "subpix/rng.hpp"

namespace subpix {

// --- exact per-transform distance ---
// Fraction of domain pixels whose mapped point leaves the codomain image,
// plus the value mismatch of those landing inside, normalized by the pixel
// count. Asymmetric in (m1, m2); always in [0, 1]. Reads every pixel of m1
// exactly once.

double distance_under(const BinaryImage2D& m1, const BinaryImage2D& m2,
                      const AffineMap2D& map);
double distance_under(const GrayImage2D& m1, const GrayImage2D& m2,
                      const AffineMap2D& map);
// Grayscale with a value map applied to the codomain sample:
// |m1(p) - L(m2(T p))|.
double distance_under(const GrayImage2D& m1, const GrayImage2D& m2,
                      const AffineMap2D& map, const IntensityMap& intensity);
double distance_under(const BinaryImage3D& m1, const BinaryImage3D& m2,
                      const AffineMap3D& map);
double distance_under(const BinaryImage3D& m1, const BinaryImage3D& m2,
                      const RestrictedMap3D& map);

// --- Monte-Carlo estimation ---

constexpr double kSamplesPerEstimateFactor = 2.0;  // per-estimate samples = ceil(this / eps^2)
constexpr double kMedianRepetitionFactor = 3.0;    // repetitions = ceil(this * ln(candidates))
constexpr double kGeneralSampleFactor = 4.0;       // sample-first matcher: k = ceil(this * n * ln(n+1) / eps^2)

std::uint64_t samples_per_estimate(double epsilon);

// max(1, ceil(3 ln l)), bumped to the next odd number so the median of that
// many estimates is itself a sampled value.
int median_repetitions(std::uint64_t candidate_count);

// k = ceil(4 n ln(n+1) / eps^2); the sample-first matcher draws k pixels
// from each image.
std::uint64_t general_sample_count(int n, double epsilon);

// One Monte-Carlo estimate of distance_under: samples_per_estimate(epsilon)
// pixels of m1 uniformly with replacement; each sample contributes 1 when
// the mapped point leaves the image and the value mismatch otherwise. Every
// sample performs exactly one read of m1 and one read of m2 (out-of-image
// samples read a coordinate-clamped pixel and discard the value), so the
// query count is a pure function of epsilon, never of n or pixel content.
// Deterministic given key.
double estimate_distance_single(const MeteredImage<BinaryImage2D>& m1,
                                const MeteredImage<BinaryImage2D>& m2,
                                const AffineMap2D& map, double epsilon,
                                std::uint64_t key);
double estimate_distance_single(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, double epsilon,
                                std::uint64_t key);
double estimate_distance_single(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, const IntensityMap& intensity,
                                double epsilon, std::uint64_t key);
double estimate_distance_single(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const AffineMap3D& map, double epsilon,
                                std::uint64_t key);
double estimate_distance_single(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const RestrictedMap3D& map, double epsilon,
                                std::uint64_t key);

// Median of `repetitions` single estimates with per-repetition keys split
// off `key`. An even repetition count is bumped to the next odd one.
double estimate_distance_median(const MeteredImage<BinaryImage2D>& m1,
                                const MeteredImage<BinaryImage2D>& m2,
                                const AffineMap2D& map, double epsilon,
                                int repetitions, std::uint64_t key);
double estimate_distance_median(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, double epsilon,
                                int repetitions, std::uint64_t key);
double estimate_distance_median(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, const IntensityMap& intensity,
                                double epsilon, int repetitions, std::uint64_t key);
double estimate_distance_median(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const AffineMap3D& map, double epsilon,
                                int repetitions, std::uint64_t key);
double estimate_distance_median(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const RestrictedMap3D& map, double epsilon,
                                int repetitions, std::uint64_t key);

// --- cover search with median-amplified estimates ---

struct EstimatorParams {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  int repetitions = 0;  // 0: derive from the candidate count
  int workers = 1;      // never changes any result, only wall time
};

struct MatchStats {
  std::uint64_t candidates = 0;
  int repetitions = 0;
  std::uint64_t samples_per_estimate = 0;
  std::uint64_t reads_m1 = 0;
  std::uint64_t reads_m2 = 0;

  std::uint64_t queries() const { return reads_m1 + reads_m2; }
};

struct MatchResult2D {
  std::uint64_t cover_index = 0;
  AffineMap2D map;
  double distance = 1.0;
  MatchStats stats;
};

struct MatchResult3D {
  std::uint64_t cover_index = 0;
  AffineMap3D map;
  double distance = 1.0;
  MatchStats stats;
};

struct MatchResultRestricted3D {
  std::uint64_t cover_index = 0;
  RestrictedMap3D map;
  double distance = 1.0;
  MatchStats stats;
};

// Estimates every cover member with the median estimator and returns the
// minimizer; ties break to the lowest cover index. Bit-identical results
// for any worker count. Total reads are exactly
//   candidates * repetitions * samples_per_estimate
// per image, a pure function of (cover parameters, epsilon).
MatchResult2D match_smooth(const BinaryImage2D& m1, const BinaryImage2D& m2,
                           const Cover2D& cover, const EstimatorParams& params);
MatchResult2D match_smooth(const GrayImage2D& m1, const GrayImage2D& m2,
                           const Cover2D& cover, const EstimatorParams& params);
MatchResult3D match_smooth_3d(const BinaryImage3D& m1, const BinaryImage3D& m2,
                              const Cover3DFull& cover, const EstimatorParams& params);
MatchResultRestricted3D match_smooth_3d(const BinaryImage3D& m1, const BinaryImage3D& m2,
                                        const Cover3DRestricted& cover,
                                        const EstimatorParams& params);

// --- sample-first matcher for arbitrary binary images ---

struct GeneralParams {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  // Selection objective (n^2 - out) * bad / n^2 and absolute hit threshold,
  // reproducing the historical form, instead of the default
  // (out + (n^2 - out) * bad) / n^2 with threshold eps * k^2 / n^2.
  bool strict_objective = false;
  int workers = 1;
};

struct GeneralResult {
  bool all_discarded = false;  // true: sentinel all-out map returned
  std::size_t candidate_index = 0;
  AffineMap2D map;
  double distance = 1.0;
  std::uint64_t sample_count = 0;  // pixels drawn from each image
  std::uint64_t reads_m1 = 0;
  std::uint64_t reads_m2 = 0;
  std::size_t discarded = 0;
};

// Draws k = general_sample_count(n, epsilon) pixels from each image once,
// then scores every candidate from the two samples alone: the out-of-image
// mass is computed geometrically (no reads), the mismatch rate from
// coordinate-colliding sample pairs. Candidates with too few collisions are
// discarded; if none survive, an all-out sentinel with distance 1 is
// returned. Reads exactly k pixels per image regardless of the candidate
// count.
GeneralResult match_general(const BinaryImage2D& m1, const BinaryImage2D& m2,
                            const std::vector<AffineMap2D>& candidates,
                            const GeneralParams& params);

// --- exhaustive-search oracles ---

constexpr double kDefaultWorkCap = 1e10;  // pixel evaluations

struct ExhaustiveResult2D {
  std::uint64_t cover_index = 0;
  AffineMap2D map;
  double distance = 1.0;
};

struct ExhaustiveResultRestricted3D {
  std::uint64_t cover_index = 0;
  RestrictedMap3D map;
  double distance = 1.0;
};

struct ExhaustiveResult3D {
  std::uint64_t cover_index = 0;
  AffineMap3D map;
  double distance = 1.0;
};

struct ExhaustiveResultGray {
  std::uint64_t cover_index = 0;
  AffineMap2D map;
  IntensityMap intensity;
  double distance = 1.0;
};

// Evaluates distance_under exactly for every cover member and returns the
// minimizer (ties to the lowest index). Throws CapacityError when
// members * pixels would exceed work_cap evaluations.
ExhaustiveResult2D exhaustive_min_distance(const BinaryImage2D& m1, const BinaryImage2D& m2,
                                           const Cover2D& cover,
                                           double work_cap = kDefaultWorkCap, int workers = 1);
ExhaustiveResult2D exhaustive_min_distance(const GrayImage2D& m1, const GrayImage2D& m2,
                                           const Cover2D& cover,
                                           double work_cap = kDefaultWorkCap, int workers = 1);
ExhaustiveResultRestricted3D exhaustive_min_distance(const BinaryImage3D& m1,
                                                     const BinaryImage3D& m2,
                                                     const Cover3DRestricted& cover,
                                                     double work_cap = kDefaultWorkCap,
                                                     int workers = 1);
ExhaustiveResult3D exhaustive_min_distance(const BinaryImage3D& m1, const BinaryImage3D& m2,
                                           const Cover3DFull& cover,
                                           double work_cap = kDefaultWorkCap, int workers = 1);

// Restricted cover members read as (planar map, value map) candidate pairs:
// con = zscale, bri = zshift / n.
ExhaustiveResultGray exhaustive_min_distance_gray(const GrayImage2D& m1, const GrayImage2D& m2,
                                                  const Cover3DRestricted& cover,
                                                  double work_cap = kDefaultWorkCap,
                                                  int workers = 1);

}  // namespace subpix
