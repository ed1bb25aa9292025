#include "subpix/reduction.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "argmin.hpp"

namespace subpix {
namespace {

void check_same_n(int n1, int n2) {
  if (n1 != n2) throw std::invalid_argument("images must have equal side length");
}

// Column heights of the reduced volume, linear layout (i-1)*n + (j-1).
std::vector<int> column_heights(const GrayImage2D& m) {
  const int n = m.n();
  std::vector<int> h(static_cast<std::size_t>(n) * n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      h[static_cast<std::size_t>(i - 1) * n + (j - 1)] = column_ones(m.v(i, j), n);
    }
  }
  return h;
}

// Height of a codomain column pushed through the value map, in voxels.
int pushed_height(int h2, const IntensityMap& intensity, int n) {
  const double raw = std::floor(intensity.con * h2 + intensity.bri * n);
  if (raw < 0.0) return 0;
  if (raw > n) return n;
  return static_cast<int>(raw);
}

double column_space_distance(const std::vector<int>& h1, const std::vector<int>& h2, int n,
                             const AffineMap2D& map, const IntensityMap& intensity) {
  const double a00 = map.A(0, 0), a01 = map.A(0, 1);
  const double a10 = map.A(1, 0), a11 = map.A(1, 1);
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double wx0 = a00 * i + map.t.x;
    const double wy0 = a10 * i + map.t.y;
    for (int j = 1; j <= n; ++j) {
      const double fi = std::floor(wx0 + a01 * j);
      const double fj = std::floor(wy0 + a11 * j);
      if (fi < 1.0 || fi > n || fj < 1.0 || fj > n) {
        acc += 1.0;
        continue;
      }
      const int hd = h1[static_cast<std::size_t>(i - 1) * n + (j - 1)];
      const int hc = h2[static_cast<std::size_t>(fi - 1.0) * n + static_cast<std::size_t>(fj - 1.0)];
      acc += std::abs(hd - pushed_height(hc, intensity, n)) / static_cast<double>(n);
    }
  }
  return acc / (static_cast<double>(n) * n);
}

}  // namespace

int column_ones(double v, int n) {
  int ones = 0;
  for (int k = 1; k <= n; ++k) {
    if (v >= static_cast<double>(k) / n) {
      ++ones;
    } else {
      break;
    }
  }
  return ones;
}

BinaryImage3D reduce_to_3d(const GrayImage2D& m) {
  const int n = m.n();
  BinaryImage3D vol(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const int ones = column_ones(m.v(i, j), n);
      for (int k = 1; k <= ones; ++k) vol.set(i, j, k, 1);
    }
  }
  return vol;
}

RestrictedMap3D lift_transform(const AffineMap2D& map, const IntensityMap& intensity, int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  RestrictedMap3D lifted;
  lifted.planar = map;
  lifted.zscale = intensity.con;
  lifted.zshift = intensity.bri * n;
  return lifted;
}

ConsistencyReport reduction_consistency(const GrayImage2D& m1, const GrayImage2D& m2,
                                        const AffineMap2D& map, const IntensityMap& intensity) {
  check_same_n(m1.n(), m2.n());
  const int n = m1.n();
  ConsistencyReport report;
  report.gray = distance_under(m1, m2, map, intensity);
  const std::vector<int> h1 = column_heights(m1);
  const std::vector<int> h2 = column_heights(m2);
  report.vol = column_space_distance(h1, h2, n, map, intensity);
  report.gap = std::abs(report.gray - report.vol);
  return report;
}

ExhaustiveResultGray exhaustive_min_column_distance(const GrayImage2D& m1,
                                                    const GrayImage2D& m2,
                                                    const Cover3DRestricted& cover,
                                                    double work_cap, int workers) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  const int n = m1.n();
  const double work = static_cast<double>(cover.size()) * n * n;
  if (work > work_cap) {
    throw CapacityError("exhaustive search work exceeds the configured cap");
  }
  const std::vector<int> h1 = column_heights(m1);
  const std::vector<int> h2 = column_heights(m2);
  auto hit = detail::parallel_argmin(cover.size(), workers, [&](int, std::uint64_t idx) {
    const RestrictedMap3D member = cover.member(idx).map;
    const IntensityMap intensity{member.zscale, member.zshift / n};
    return column_space_distance(h1, h2, n, member.planar, intensity);
  });
  const RestrictedMap3D best = cover.member(hit.index).map;
  return {hit.index, best.planar, IntensityMap{best.zscale, best.zshift / n}, hit.value};
}

GrayMatchResult match_grayscale(const GrayImage2D& m1, const GrayImage2D& m2,
                                const Cover3DRestricted& cover, const EstimatorParams& params) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  const double n = cover.params().n;
  const std::uint64_t count = cover.size();
  const std::uint64_t per = samples_per_estimate(params.epsilon);
  int reps = params.repetitions > 0 ? params.repetitions : median_repetitions(count);
  if (reps % 2 == 0) ++reps;
  int workers = params.workers < 1 ? 1 : params.workers;
  if (static_cast<std::uint64_t>(workers) > count) workers = static_cast<int>(count);

  std::deque<MeteredImage<GrayImage2D>> v1, v2;
  for (int w = 0; w < workers; ++w) {
    v1.emplace_back(m1);
    v2.emplace_back(m2);
  }
  auto hit = detail::parallel_argmin(count, workers, [&](int w, std::uint64_t idx) {
    const RestrictedMap3D member = cover.member(idx).map;
    const IntensityMap intensity{member.zscale, member.zshift / n};
    return estimate_distance_median(v1[w], v2[w], member.planar, intensity, params.epsilon,
                                    reps, split_key(params.seed, idx));
  });
  const RestrictedMap3D best = cover.member(hit.index).map;
  GrayMatchResult r;
  r.cover_index = hit.index;
  r.map = best.planar;
  r.intensity = IntensityMap{best.zscale, best.zshift / n};
  r.distance = hit.value;
  r.stats.candidates = count;
  r.stats.repetitions = reps;
  r.stats.samples_per_estimate = per;
  for (const auto& m : v1) r.stats.reads_m1 += m.reads();
  for (const auto& m : v2) r.stats.reads_m2 += m.reads();
  return r;
}

}  // namespace subpix
