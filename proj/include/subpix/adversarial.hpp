#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subpix/image.hpp"
#include "subpix/matcher.hpp"

namespace subpix {

struct AdversarialParams {
  int n = 0;
  int k = 1;  // block side; must divide n
  std::uint64_t seed = 0;

  void validate() const;
};

struct ImagePair {
  BinaryImage2D m1, m2;
};

// Two independent images of i.i.d. fair-coin k x k blocks. Deterministic
// given the seed.
ImagePair gen_d1(const AdversarialParams& params);

struct PlantedPair {
  BinaryImage2D m1, m2;
  int s_h = 0;  // planted row shift
  int s_v = 0;  // planted column shift
};

// M1 as in gen_d1; s_h, s_v drawn uniformly from the multiples of k in
// [0, floor(n/8)]; M2(i, j) copies M1(i - s_h, j - s_v) where that pixel
// exists and the remaining strips are fresh random blocks. Translating by
// (s_h, s_v) matches the copied overlap exactly, so that map certifies
// distance 1 - (n - s_h)(n - s_v)/n^2 <= 15/64.
PlantedPair gen_d2(const AdversarialParams& params);

// Same construction with the shift fixed by the caller (both must be
// nonnegative multiples of k, at most n).
PlantedPair gen_d2_with_shift(const AdversarialParams& params, int s_h, int s_v);

// Exact minimum of distance_under over every translation with
// |shift|_inf <= radius. Integer shifts suffice: flooring makes any real
// translation act as an integer one, and any shift beyond
// radius >= ceil(0.4 n) leaves more than a 0.4 fraction of pixels out of
// the image. Rows are bit-packed; mismatches count via XOR + popcount.
double min_translation_distance(const BinaryImage2D& m1, const BinaryImage2D& m2, int radius);

struct SeparationRow {
  int n = 0;
  std::uint64_t seed = 0;
  std::string family;                // "d1" or "d2"
  double matcher_distance = 1.0;     // min median estimate over the shift candidates
  double exhaustive_distance = 1.0;  // exact translation-family minimum
  double planted_distance = 1.0;     // d2: exact distance of the planted shift
  int s_h = -1, s_v = -1;            // d2 planted shift
  std::uint64_t queries = 0;         // reads performed by the estimator search
};

// For each (n, seed) generates one pair from each family and searches the
// family of block-aligned shifts (multiples of k in [0, floor(n/8)] per
// axis, the family gen_d2 plants from) with the median-amplified estimator,
// alongside the exact translation minimum. Planted rows land below
// 15/64 + epsilon; independent pairs stay near 1/2.
std::vector<SeparationRow> separation_experiment(const std::vector<int>& n_values, int k,
                                                 double epsilon,
                                                 const std::vector<std::uint64_t>& seeds);

}  // namespace subpix
