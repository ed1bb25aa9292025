#pragma once

#include <cstdint>

#include "subpix/cover.hpp"
#include "subpix/image.hpp"
#include "subpix/matcher.hpp"

namespace subpix {

// Level-set volume of a grayscale image: voxel (i, j, k) is 1 iff
// m(i, j) >= k / n, so column (i, j) carries floor(m(i, j) * n) ones at the
// bottom and every column is monotone (no 1 above a 0).
BinaryImage3D reduce_to_3d(const GrayImage2D& m);

// Number of ones the reduction puts into a column of value v.
int column_ones(double v, int n);

// (T, L) as a member of the restricted 3D family: planar part T, third
// coordinate scaled by con and shifted by bri in voxel units (value v lives
// at height v * n).
RestrictedMap3D lift_transform(const AffineMap2D& map, const IntensityMap& intensity, int n);

// Compares the grayscale distance |m1(p) - L(m2(T p))| with its volume
// counterpart, where the codomain column height is pushed through L in
// voxel units: kappa = clamp(floor(con * h2 + bri * n), 0, n). Each side
// quantizes values to multiples of 1/n, so the per-pixel discrepancy stays
// within (c + 2)/n and the image-averaged gap concentrates near 1/n on
// random inputs.
struct ConsistencyReport {
  double gray = 0.0;  // value-space distance
  double vol = 0.0;   // column-space distance of the reduced volumes
  double gap = 0.0;   // |gray - vol|
};

ConsistencyReport reduction_consistency(const GrayImage2D& m1, const GrayImage2D& m2,
                                        const AffineMap2D& map, const IntensityMap& intensity);

// Exhaustive minimum of the column-space distance over the cover members
// read as (T, L) pairs; counterpart of exhaustive_min_distance_gray for
// equivalence tests between the two sides of the reduction.
ExhaustiveResultGray exhaustive_min_column_distance(const GrayImage2D& m1,
                                                    const GrayImage2D& m2,
                                                    const Cover3DRestricted& cover,
                                                    double work_cap = kDefaultWorkCap,
                                                    int workers = 1);

struct GrayMatchResult {
  std::uint64_t cover_index = 0;
  AffineMap2D map;
  IntensityMap intensity;
  double distance = 1.0;
  MatchStats stats;
};

// Cover search over (T, L) candidates with the median-amplified sampling
// estimator, sampling grayscale pixels directly (the volume is the analysis
// device, not the hot path). Ties break to the lowest cover index; results
// are bit-identical for any worker count; the query counter depends only on
// (cover parameters, epsilon), never on n or pixel content.
GrayMatchResult match_grayscale(const GrayImage2D& m1, const GrayImage2D& m2,
                                const Cover3DRestricted& cover, const EstimatorParams& params);

}  // namespace subpix
