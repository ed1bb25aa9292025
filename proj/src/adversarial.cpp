#include "subpix/adversarial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subpix/rng.hpp"
#include "subpix/transform.hpp"

namespace subpix {

namespace {

void fill_blocks(BinaryImage2D& img, int k, std::uint64_t key) {
  const int blocks = img.n() / k;
  for (int bi = 0; bi < blocks; ++bi) {
    for (int bj = 0; bj < blocks; ++bj) {
      const auto draw = rng_at(key, static_cast<std::uint64_t>(bi) * blocks + bj);
      const int v = static_cast<int>(draw & 1u);
      for (int di = 1; di <= k; ++di)
        for (int dj = 1; dj <= k; ++dj) img.set(bi * k + di, bj * k + dj, v);
    }
  }
}

}  // namespace

void AdversarialParams::validate() const {
  if (n < 2) throw std::invalid_argument("image side must be at least 2");
  if (k < 1) throw std::invalid_argument("block side must be positive");
  if (n % k != 0) throw std::invalid_argument("block side must divide the image side");
}

ImagePair gen_d1(const AdversarialParams& params) {
  params.validate();
  ImagePair pair{BinaryImage2D(params.n), BinaryImage2D(params.n)};
  fill_blocks(pair.m1, params.k, split_key(params.seed, 0));
  fill_blocks(pair.m2, params.k, split_key(params.seed, 1));
  return pair;
}

PlantedPair gen_d2_with_shift(const AdversarialParams& params, int s_h, int s_v) {
  params.validate();
  if (s_h < 0 || s_v < 0 || s_h > params.n || s_v > params.n)
    throw std::invalid_argument("shift out of range");
  if (s_h % params.k != 0 || s_v % params.k != 0)
    throw std::invalid_argument("shift must be a multiple of the block side");
  PlantedPair pair{BinaryImage2D(params.n), BinaryImage2D(params.n), s_h, s_v};
  fill_blocks(pair.m1, params.k, split_key(params.seed, 0));
  // Fresh blocks everywhere first, then the copy overwrites its region; the
  // shift is a multiple of k so block alignment survives.
  fill_blocks(pair.m2, params.k, split_key(params.seed, 2));
  for (int i = s_h + 1; i <= params.n; ++i)
    for (int j = s_v + 1; j <= params.n; ++j) pair.m2.set(i, j, pair.m1.v(i - s_h, j - s_v));
  return pair;
}

PlantedPair gen_d2(const AdversarialParams& params) {
  params.validate();
  const std::uint64_t shift_key = split_key(params.seed, 1);
  const int choices = params.n / 8 / params.k + 1;
  const int s_h = params.k * static_cast<int>(uniform_below(shift_key, 0, choices));
  const int s_v = params.k * static_cast<int>(uniform_below(shift_key, 1, choices));
  return gen_d2_with_shift(params, s_h, s_v);
}

namespace {

struct PackedRows {
  int n = 0;
  int words = 0;
  std::vector<std::uint64_t> bits;  // row-major, n rows of `words` words

  const std::uint64_t* row(int i) const {  // i is 0-based
    return bits.data() + static_cast<std::size_t>(i) * words;
  }
};

PackedRows pack_rows(const BinaryImage2D& img) {
  PackedRows p;
  p.n = img.n();
  p.words = (p.n + 63) / 64;
  p.bits.assign(static_cast<std::size_t>(p.n) * p.words, 0);
  for (int i = 1; i <= p.n; ++i) {
    auto* row = p.bits.data() + static_cast<std::size_t>(i - 1) * p.words;
    for (int j = 1; j <= p.n; ++j)
      if (img.v(i, j)) row[(j - 1) >> 6] |= std::uint64_t{1} << ((j - 1) & 63);
  }
  return p;
}

inline std::uint64_t word_at(const std::uint64_t* row, int words, int idx) {
  return (idx >= 0 && idx < words) ? row[idx] : 0;
}

// Word w of `row` shifted so output bit b holds input bit b + sj.
inline std::uint64_t shifted_word(const std::uint64_t* row, int words, int w, int sj) {
  const long long base = static_cast<long long>(w) * 64 + sj;
  const int q = static_cast<int>(base >> 6);  // floor division
  const int r = static_cast<int>(base & 63);
  const std::uint64_t lo = word_at(row, words, q);
  if (r == 0) return lo;
  return (lo >> r) | (word_at(row, words, q + 1) << (64 - r));
}

inline std::uint64_t range_mask(int lo, int hi) {  // bits [lo, hi), 0 <= lo <= hi <= 64
  if (lo >= hi) return 0;
  const std::uint64_t m = ~std::uint64_t{0} >> (64 - (hi - lo));
  return m << lo;
}

}  // namespace

double min_translation_distance(const BinaryImage2D& m1, const BinaryImage2D& m2, int radius) {
  if (m1.n() != m2.n()) throw std::invalid_argument("image sizes differ");
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  const int n = m1.n();
  const PackedRows p1 = pack_rows(m1);
  const PackedRows p2 = pack_rows(m2);
  const double total = static_cast<double>(n) * n;
  double best = 1.0;  // a shift moving every pixel out of the image scores 1
  std::vector<std::uint64_t> mask(p1.words);
  std::vector<std::uint64_t> shifted(static_cast<std::size_t>(n) * p1.words);
  for (int sj = -radius; sj <= radius; ++sj) {
    const int jlo = std::max(0, -sj);
    const int jhi = std::min(n, n - sj);
    if (jlo >= jhi) continue;
    const int vc = jhi - jlo;
    for (int w = 0; w < p1.words; ++w)
      mask[w] = range_mask(std::clamp(jlo - 64 * w, 0, 64), std::clamp(jhi - 64 * w, 0, 64));
    for (int i = 0; i < n; ++i) {
      const auto* src = p2.row(i);
      auto* dst = shifted.data() + static_cast<std::size_t>(i) * p1.words;
      for (int w = 0; w < p1.words; ++w) dst[w] = shifted_word(src, p1.words, w, sj) & mask[w];
    }
    for (int si = -radius; si <= radius; ++si) {
      const int ilo = std::max(0, -si);
      const int ihi = std::min(n, n - si);
      if (ilo >= ihi) continue;
      const int vr = ihi - ilo;
      long long mismatches = 0;
      for (int i = ilo; i < ihi; ++i) {
        const auto* a = p1.row(i);
        const auto* b = shifted.data() + static_cast<std::size_t>(i + si) * p1.words;
        for (int w = 0; w < p1.words; ++w)
          mismatches += std::popcount((a[w] & mask[w]) ^ b[w]);
      }
      const double out = total - static_cast<double>(vr) * vc;
      best = std::min(best, (out + static_cast<double>(mismatches)) / total);
    }
  }
  return best;
}

namespace {

// Median-estimate every block-aligned shift candidate and keep the smallest.
SeparationRow run_estimator_search(const BinaryImage2D& a, const BinaryImage2D& b, int k,
                                   double epsilon, std::uint64_t seed) {
  const int n = a.n();
  std::vector<AffineMap2D> candidates;
  for (int sh = 0; sh <= n / 8; sh += k)
    for (int sv = 0; sv <= n / 8; sv += k)
      candidates.push_back(AffineMap2D::translation(sh, sv));
  const std::uint64_t reps = median_repetitions(candidates.size());
  MeteredImage<BinaryImage2D> ma(a);
  MeteredImage<BinaryImage2D> mb(b);
  const std::uint64_t base = split_key(seed, 3);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    const double est =
        estimate_distance_median(ma, mb, candidates[idx], epsilon, reps, split_key(base, idx));
    if (est < best) best = est;
  }
  SeparationRow row;
  row.matcher_distance = best;
  row.queries = ma.reads() + mb.reads();
  return row;
}

}  // namespace

std::vector<SeparationRow> separation_experiment(const std::vector<int>& n_values, int k,
                                                 double epsilon,
                                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<SeparationRow> table;
  for (const int n : n_values) {
    const AdversarialParams base{n, k, 0};
    base.validate();
    const int radius = static_cast<int>(std::ceil(0.4 * n));
    for (const std::uint64_t seed : seeds) {
      const AdversarialParams params{n, k, seed};
      {
        ImagePair pair = gen_d1(params);
        SeparationRow row = run_estimator_search(pair.m1, pair.m2, k, epsilon, seed);
        row.n = n;
        row.seed = seed;
        row.family = "d1";
        row.exhaustive_distance = min_translation_distance(pair.m1, pair.m2, radius);
        table.push_back(std::move(row));
      }
      {
        PlantedPair pair = gen_d2(params);
        SeparationRow row = run_estimator_search(pair.m1, pair.m2, k, epsilon, seed);
        row.n = n;
        row.seed = seed;
        row.family = "d2";
        row.s_h = pair.s_h;
        row.s_v = pair.s_v;
        row.planted_distance =
            distance_under(pair.m1, pair.m2, AffineMap2D::translation(pair.s_h, pair.s_v));
        row.exhaustive_distance = min_translation_distance(pair.m1, pair.m2, radius);
        table.push_back(std::move(row));
      }
    }
  }
  return table;
}

}  // namespace subpix
