#include "subpix/matcher.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "argmin.hpp"

namespace subpix {
namespace {

void check_same_n(int n1, int n2) {
  if (n1 != n2) throw std::invalid_argument("images must have equal side length");
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
}

// Coordinate clamp for an already-floored value; exact for f in [1, n].
int clamp_coord(double f, int n) {
  if (f < 1.0) return 1;
  if (f > n) return n;
  return static_cast<int>(f);
}

}  // namespace

// --- exact per-transform distance ---

double distance_under(const BinaryImage2D& m1, const BinaryImage2D& m2,
                      const AffineMap2D& map) {
  check_same_n(m1.n(), m2.n());
  const int n = m1.n();
  const double a00 = map.A(0, 0), a01 = map.A(0, 1);
  const double a10 = map.A(1, 0), a11 = map.A(1, 1);
  long long acc = 0;
  for (int i = 1; i <= n; ++i) {
    const double wx0 = a00 * i + map.t.x;
    const double wy0 = a10 * i + map.t.y;
    for (int j = 1; j <= n; ++j) {
      const double fi = std::floor(wx0 + a01 * j);
      const double fj = std::floor(wy0 + a11 * j);
      if (fi < 1.0 || fi > n || fj < 1.0 || fj > n) {
        ++acc;
      } else if (m1.v(i, j) != m2.v(static_cast<int>(fi), static_cast<int>(fj))) {
        ++acc;
      }
    }
  }
  return static_cast<double>(acc) / (static_cast<double>(n) * n);
}

double distance_under(const GrayImage2D& m1, const GrayImage2D& m2,
                      const AffineMap2D& map) {
  check_same_n(m1.n(), m2.n());
  const int n = m1.n();
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
      } else {
        acc += std::abs(m1.v(i, j) - m2.v(static_cast<int>(fi), static_cast<int>(fj)));
      }
    }
  }
  return acc / (static_cast<double>(n) * n);
}

double distance_under(const GrayImage2D& m1, const GrayImage2D& m2,
                      const AffineMap2D& map, const IntensityMap& intensity) {
  check_same_n(m1.n(), m2.n());
  const int n = m1.n();
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
      } else {
        const double mapped =
            apply_intensity(intensity, m2.v(static_cast<int>(fi), static_cast<int>(fj)));
        acc += std::abs(m1.v(i, j) - mapped);
      }
    }
  }
  return acc / (static_cast<double>(n) * n);
}

double distance_under(const BinaryImage3D& m1, const BinaryImage3D& m2,
                      const AffineMap3D& map) {
  check_same_n(m1.n(), m2.n());
  const int n = m1.n();
  long long acc = 0;
  for (int k = 1; k <= n; ++k) {
    for (int i = 1; i <= n; ++i) {
      const Vec3 base = map.A * Vec3{static_cast<double>(i), 0.0, static_cast<double>(k)} + map.t;
      for (int j = 1; j <= n; ++j) {
        const double fx = std::floor(base.x + map.A(0, 1) * j);
        const double fy = std::floor(base.y + map.A(1, 1) * j);
        const double fz = std::floor(base.z + map.A(2, 1) * j);
        if (fx < 1.0 || fx > n || fy < 1.0 || fy > n || fz < 1.0 || fz > n) {
          ++acc;
        } else if (m1.v(i, j, k) != m2.v(static_cast<int>(fx), static_cast<int>(fy),
                                         static_cast<int>(fz))) {
          ++acc;
        }
      }
    }
  }
  return static_cast<double>(acc) / (static_cast<double>(n) * n * n);
}

double distance_under(const BinaryImage3D& m1, const BinaryImage3D& m2,
                      const RestrictedMap3D& map) {
  check_same_n(m1.n(), m2.n());
  const int n = m1.n();
  const double a00 = map.planar.A(0, 0), a01 = map.planar.A(0, 1);
  const double a10 = map.planar.A(1, 0), a11 = map.planar.A(1, 1);
  long long acc = 0;
  for (int k = 1; k <= n; ++k) {
    double fz = std::floor(map.zscale * k + map.zshift);
    if (fz < 1.0) fz = 1.0;
    if (fz > n) fz = static_cast<double>(n);
    const int zk = static_cast<int>(fz);
    for (int i = 1; i <= n; ++i) {
      const double wx0 = a00 * i + map.planar.t.x;
      const double wy0 = a10 * i + map.planar.t.y;
      for (int j = 1; j <= n; ++j) {
        const double fi = std::floor(wx0 + a01 * j);
        const double fj = std::floor(wy0 + a11 * j);
        if (fi < 1.0 || fi > n || fj < 1.0 || fj > n) {
          ++acc;
        } else if (m1.v(i, j, k) !=
                   m2.v(static_cast<int>(fi), static_cast<int>(fj), zk)) {
          ++acc;
        }
      }
    }
  }
  return static_cast<double>(acc) / (static_cast<double>(n) * n * n);
}

// --- Monte-Carlo estimation ---

std::uint64_t samples_per_estimate(double epsilon) {
  check_epsilon(epsilon);
  return static_cast<std::uint64_t>(std::ceil(kSamplesPerEstimateFactor / (epsilon * epsilon)));
}

int median_repetitions(std::uint64_t candidate_count) {
  if (candidate_count < 1) throw std::invalid_argument("candidate count must be positive");
  const double reps = kMedianRepetitionFactor * std::log(static_cast<double>(candidate_count));
  int m = std::max(1, static_cast<int>(std::ceil(reps)));
  if (m % 2 == 0) ++m;
  return m;
}

std::uint64_t general_sample_count(int n, double epsilon) {
  check_epsilon(epsilon);
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  const double k = kGeneralSampleFactor * n * std::log(n + 1.0) / (epsilon * epsilon);
  return static_cast<std::uint64_t>(std::ceil(k));
}

namespace {

template <class Img, class Mis>
double estimate_core_2d(const MeteredImage<Img>& m1, const MeteredImage<Img>& m2,
                        const AffineMap2D& map, std::uint64_t per, std::uint64_t key,
                        Mis&& mis) {
  const int n = m1.n();
  const auto un = static_cast<std::uint64_t>(n);
  const double a00 = map.A(0, 0), a01 = map.A(0, 1);
  const double a10 = map.A(1, 0), a11 = map.A(1, 1);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < per; ++s) {
    const int i = 1 + static_cast<int>(uniform_below(key, 2 * s, un));
    const int j = 1 + static_cast<int>(uniform_below(key, 2 * s + 1, un));
    const auto v1 = m1.read(i, j);
    const double fi = std::floor(a00 * i + a01 * j + map.t.x);
    const double fj = std::floor(a10 * i + a11 * j + map.t.y);
    const bool in = fi >= 1.0 && fi <= n && fj >= 1.0 && fj <= n;
    // Out-of-image samples still read one (clamped) pixel and discard the
    // value: two reads per sample always, so the total query count depends
    // only on the sampling parameters.
    const auto v2 = m2.read(clamp_coord(fi, n), clamp_coord(fj, n));
    sum += in ? mis(v1, v2) : 1.0;
  }
  return sum / static_cast<double>(per);
}

template <class Mis>
double estimate_core_3d(const MeteredImage<BinaryImage3D>& m1,
                        const MeteredImage<BinaryImage3D>& m2, const AffineMap3D& map,
                        std::uint64_t per, std::uint64_t key, Mis&& mis) {
  const int n = m1.n();
  const auto un = static_cast<std::uint64_t>(n);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < per; ++s) {
    const int i = 1 + static_cast<int>(uniform_below(key, 3 * s, un));
    const int j = 1 + static_cast<int>(uniform_below(key, 3 * s + 1, un));
    const int k = 1 + static_cast<int>(uniform_below(key, 3 * s + 2, un));
    const auto v1 = m1.read(i, j, k);
    const Vec3 w = map.map_point({static_cast<double>(i), static_cast<double>(j),
                                  static_cast<double>(k)});
    const double fx = std::floor(w.x), fy = std::floor(w.y), fz = std::floor(w.z);
    const bool in = fx >= 1.0 && fx <= n && fy >= 1.0 && fy <= n && fz >= 1.0 && fz <= n;
    const auto v2 = m2.read(clamp_coord(fx, n), clamp_coord(fy, n), clamp_coord(fz, n));
    sum += in ? mis(v1, v2) : 1.0;
  }
  return sum / static_cast<double>(per);
}

double estimate_core_restricted(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const RestrictedMap3D& map, std::uint64_t per,
                                std::uint64_t key) {
  const int n = m1.n();
  const auto un = static_cast<std::uint64_t>(n);
  const double a00 = map.planar.A(0, 0), a01 = map.planar.A(0, 1);
  const double a10 = map.planar.A(1, 0), a11 = map.planar.A(1, 1);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < per; ++s) {
    const int i = 1 + static_cast<int>(uniform_below(key, 3 * s, un));
    const int j = 1 + static_cast<int>(uniform_below(key, 3 * s + 1, un));
    const int k = 1 + static_cast<int>(uniform_below(key, 3 * s + 2, un));
    const auto v1 = m1.read(i, j, k);
    const double fi = std::floor(a00 * i + a01 * j + map.planar.t.x);
    const double fj = std::floor(a10 * i + a11 * j + map.planar.t.y);
    const double fz = std::floor(map.zscale * k + map.zshift);
    const bool in = fi >= 1.0 && fi <= n && fj >= 1.0 && fj <= n;
    const auto v2 = m2.read(clamp_coord(fi, n), clamp_coord(fj, n), clamp_coord(fz, n));
    sum += in ? (v1 != v2 ? 1.0 : 0.0) : 1.0;
  }
  return sum / static_cast<double>(per);
}

template <class Single>
double median_of(int repetitions, std::uint64_t key, Single&& single) {
  int m = repetitions < 1 ? 1 : repetitions;
  if (m % 2 == 0) ++m;
  std::vector<double> est(m);
  for (int r = 0; r < m; ++r) est[r] = single(split_key(key, static_cast<std::uint64_t>(r)));
  std::nth_element(est.begin(), est.begin() + m / 2, est.end());
  return est[m / 2];
}

}  // namespace

double estimate_distance_single(const MeteredImage<BinaryImage2D>& m1,
                                const MeteredImage<BinaryImage2D>& m2,
                                const AffineMap2D& map, double epsilon, std::uint64_t key) {
  check_same_n(m1.n(), m2.n());
  return estimate_core_2d(m1, m2, map, samples_per_estimate(epsilon), key,
                          [](std::uint8_t a, std::uint8_t b) { return a != b ? 1.0 : 0.0; });
}

double estimate_distance_single(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, double epsilon, std::uint64_t key) {
  check_same_n(m1.n(), m2.n());
  return estimate_core_2d(m1, m2, map, samples_per_estimate(epsilon), key,
                          [](double a, double b) { return std::abs(a - b); });
}

double estimate_distance_single(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, const IntensityMap& intensity,
                                double epsilon, std::uint64_t key) {
  check_same_n(m1.n(), m2.n());
  return estimate_core_2d(m1, m2, map, samples_per_estimate(epsilon), key,
                          [&intensity](double a, double b) {
                            return std::abs(a - apply_intensity(intensity, b));
                          });
}

double estimate_distance_single(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const AffineMap3D& map, double epsilon, std::uint64_t key) {
  check_same_n(m1.n(), m2.n());
  return estimate_core_3d(m1, m2, map, samples_per_estimate(epsilon), key,
                          [](std::uint8_t a, std::uint8_t b) { return a != b ? 1.0 : 0.0; });
}

double estimate_distance_single(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const RestrictedMap3D& map, double epsilon, std::uint64_t key) {
  check_same_n(m1.n(), m2.n());
  return estimate_core_restricted(m1, m2, map, samples_per_estimate(epsilon), key);
}

double estimate_distance_median(const MeteredImage<BinaryImage2D>& m1,
                                const MeteredImage<BinaryImage2D>& m2,
                                const AffineMap2D& map, double epsilon, int repetitions,
                                std::uint64_t key) {
  return median_of(repetitions, key, [&](std::uint64_t rk) {
    return estimate_distance_single(m1, m2, map, epsilon, rk);
  });
}

double estimate_distance_median(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, double epsilon, int repetitions,
                                std::uint64_t key) {
  return median_of(repetitions, key, [&](std::uint64_t rk) {
    return estimate_distance_single(m1, m2, map, epsilon, rk);
  });
}

double estimate_distance_median(const MeteredImage<GrayImage2D>& m1,
                                const MeteredImage<GrayImage2D>& m2,
                                const AffineMap2D& map, const IntensityMap& intensity,
                                double epsilon, int repetitions, std::uint64_t key) {
  return median_of(repetitions, key, [&](std::uint64_t rk) {
    return estimate_distance_single(m1, m2, map, intensity, epsilon, rk);
  });
}

double estimate_distance_median(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const AffineMap3D& map, double epsilon, int repetitions,
                                std::uint64_t key) {
  return median_of(repetitions, key, [&](std::uint64_t rk) {
    return estimate_distance_single(m1, m2, map, epsilon, rk);
  });
}

double estimate_distance_median(const MeteredImage<BinaryImage3D>& m1,
                                const MeteredImage<BinaryImage3D>& m2,
                                const RestrictedMap3D& map, double epsilon, int repetitions,
                                std::uint64_t key) {
  return median_of(repetitions, key, [&](std::uint64_t rk) {
    return estimate_distance_single(m1, m2, map, epsilon, rk);
  });
}

// --- cover search ---

namespace {

// Per-worker counting views over a shared read-only image pair.
template <class Img>
struct MeterPool {
  std::deque<MeteredImage<Img>> a, b;

  MeterPool(const Img& m1, const Img& m2, int workers) {
    for (int w = 0; w < workers; ++w) {
      a.emplace_back(m1);
      b.emplace_back(m2);
    }
  }
  std::uint64_t reads_a() const {
    std::uint64_t s = 0;
    for (const auto& m : a) s += m.reads();
    return s;
  }
  std::uint64_t reads_b() const {
    std::uint64_t s = 0;
    for (const auto& m : b) s += m.reads();
    return s;
  }
};

struct SearchPlan {
  std::uint64_t per = 0;
  int repetitions = 0;
  int workers = 1;
};

SearchPlan plan_search(const EstimatorParams& params, std::uint64_t candidates) {
  SearchPlan plan;
  plan.per = samples_per_estimate(params.epsilon);
  plan.repetitions = params.repetitions > 0 ? params.repetitions : median_repetitions(candidates);
  if (plan.repetitions % 2 == 0) ++plan.repetitions;
  plan.workers = params.workers < 1 ? 1 : params.workers;
  if (static_cast<std::uint64_t>(plan.workers) > candidates) {
    plan.workers = static_cast<int>(candidates);
  }
  return plan;
}

MatchStats finish_stats(const SearchPlan& plan, std::uint64_t candidates,
                        std::uint64_t reads_a, std::uint64_t reads_b) {
  MatchStats s;
  s.candidates = candidates;
  s.repetitions = plan.repetitions;
  s.samples_per_estimate = plan.per;
  s.reads_m1 = reads_a;
  s.reads_m2 = reads_b;
  return s;
}

}  // namespace

MatchResult2D match_smooth(const BinaryImage2D& m1, const BinaryImage2D& m2,
                           const Cover2D& cover, const EstimatorParams& params) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  const std::uint64_t count = cover.size();
  const SearchPlan plan = plan_search(params, count);
  MeterPool<BinaryImage2D> pool(m1, m2, plan.workers);
  auto hit = detail::parallel_argmin(count, plan.workers, [&](int w, std::uint64_t idx) {
    return estimate_distance_median(pool.a[w], pool.b[w], cover.member(idx).map,
                                    params.epsilon, plan.repetitions,
                                    split_key(params.seed, idx));
  });
  MatchResult2D r;
  r.cover_index = hit.index;
  r.map = cover.member(hit.index).map;
  r.distance = hit.value;
  r.stats = finish_stats(plan, count, pool.reads_a(), pool.reads_b());
  return r;
}

MatchResult2D match_smooth(const GrayImage2D& m1, const GrayImage2D& m2,
                           const Cover2D& cover, const EstimatorParams& params) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  const std::uint64_t count = cover.size();
  const SearchPlan plan = plan_search(params, count);
  MeterPool<GrayImage2D> pool(m1, m2, plan.workers);
  auto hit = detail::parallel_argmin(count, plan.workers, [&](int w, std::uint64_t idx) {
    return estimate_distance_median(pool.a[w], pool.b[w], cover.member(idx).map,
                                    params.epsilon, plan.repetitions,
                                    split_key(params.seed, idx));
  });
  MatchResult2D r;
  r.cover_index = hit.index;
  r.map = cover.member(hit.index).map;
  r.distance = hit.value;
  r.stats = finish_stats(plan, count, pool.reads_a(), pool.reads_b());
  return r;
}

MatchResult3D match_smooth_3d(const BinaryImage3D& m1, const BinaryImage3D& m2,
                              const Cover3DFull& cover, const EstimatorParams& params) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  const std::uint64_t count = cover.size();
  const SearchPlan plan = plan_search(params, count);
  MeterPool<BinaryImage3D> pool(m1, m2, plan.workers);
  auto hit = detail::parallel_argmin(count, plan.workers, [&](int w, std::uint64_t idx) {
    return estimate_distance_median(pool.a[w], pool.b[w], cover.member(idx).map,
                                    params.epsilon, plan.repetitions,
                                    split_key(params.seed, idx));
  });
  MatchResult3D r;
  r.cover_index = hit.index;
  r.map = cover.member(hit.index).map;
  r.distance = hit.value;
  r.stats = finish_stats(plan, count, pool.reads_a(), pool.reads_b());
  return r;
}

MatchResultRestricted3D match_smooth_3d(const BinaryImage3D& m1, const BinaryImage3D& m2,
                                        const Cover3DRestricted& cover,
                                        const EstimatorParams& params) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  const std::uint64_t count = cover.size();
  const SearchPlan plan = plan_search(params, count);
  MeterPool<BinaryImage3D> pool(m1, m2, plan.workers);
  auto hit = detail::parallel_argmin(count, plan.workers, [&](int w, std::uint64_t idx) {
    return estimate_distance_median(pool.a[w], pool.b[w], cover.member(idx).map,
                                    params.epsilon, plan.repetitions,
                                    split_key(params.seed, idx));
  });
  MatchResultRestricted3D r;
  r.cover_index = hit.index;
  r.map = cover.member(hit.index).map;
  r.distance = hit.value;
  r.stats = finish_stats(plan, count, pool.reads_a(), pool.reads_b());
  return r;
}

// --- sample-first matcher ---

GeneralResult match_general(const BinaryImage2D& m1, const BinaryImage2D& m2,
                            const std::vector<AffineMap2D>& candidates,
                            const GeneralParams& params) {
  check_same_n(m1.n(), m2.n());
  if (candidates.empty()) throw std::invalid_argument("candidate list is empty");
  check_epsilon(params.epsilon);
  const int n = m1.n();
  const auto un = static_cast<std::uint64_t>(n);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  if (cells > 100'000'000) {
    throw CapacityError("collision table too large for this n");
  }
  const std::uint64_t k = general_sample_count(n, params.epsilon);

  MeteredImage<BinaryImage2D> v1(m1), v2(m2);
  struct Cnt {
    std::uint32_t zero = 0, one = 0;
  };
  std::vector<Cnt> t1(cells), t2(cells);
  std::vector<std::uint32_t> coords1;  // distinct sampled m1 coordinates
  const std::uint64_t key1 = split_key(params.seed, 0);
  const std::uint64_t key2 = split_key(params.seed, 1);
  for (std::uint64_t s = 0; s < k; ++s) {
    const int i = 1 + static_cast<int>(uniform_below(key1, 2 * s, un));
    const int j = 1 + static_cast<int>(uniform_below(key1, 2 * s + 1, un));
    Cnt& c = t1[static_cast<std::size_t>(i - 1) * n + (j - 1)];
    if (c.zero == 0 && c.one == 0) {
      coords1.push_back(static_cast<std::uint32_t>((i - 1) * n + (j - 1)));
    }
    if (v1.read(i, j)) {
      ++c.one;
    } else {
      ++c.zero;
    }
  }
  for (std::uint64_t s = 0; s < k; ++s) {
    const int i = 1 + static_cast<int>(uniform_below(key2, 2 * s, un));
    const int j = 1 + static_cast<int>(uniform_below(key2, 2 * s + 1, un));
    Cnt& c = t2[static_cast<std::size_t>(i - 1) * n + (j - 1)];
    if (v2.read(i, j)) {
      ++c.one;
    } else {
      ++c.zero;
    }
  }

  const double n2 = static_cast<double>(n) * n;
  const double hit_threshold =
      params.strict_objective
          ? params.epsilon
          : params.epsilon * static_cast<double>(k) * static_cast<double>(k) / n2;
  std::atomic<std::uint64_t> discarded{0};

  int workers = params.workers < 1 ? 1 : params.workers;
  auto hit = detail::parallel_argmin(
      candidates.size(), workers, [&](int, std::uint64_t idx) {
        const AffineMap2D& map = candidates[idx];
        const double a00 = map.A(0, 0), a01 = map.A(0, 1);
        const double a10 = map.A(1, 0), a11 = map.A(1, 1);
        std::uint64_t out = 0;
        for (int i = 1; i <= n; ++i) {
          const double wx0 = a00 * i + map.t.x;
          const double wy0 = a10 * i + map.t.y;
          for (int j = 1; j <= n; ++j) {
            const double fi = std::floor(wx0 + a01 * j);
            const double fj = std::floor(wy0 + a11 * j);
            if (fi < 1.0 || fi > n || fj < 1.0 || fj > n) ++out;
          }
        }
        std::uint64_t hits = 0, bads = 0;
        for (const std::uint32_t lin : coords1) {
          const int i = static_cast<int>(lin) / n + 1;
          const int j = static_cast<int>(lin) % n + 1;
          const double fi = std::floor(a00 * i + a01 * j + map.t.x);
          const double fj = std::floor(a10 * i + a11 * j + map.t.y);
          if (fi < 1.0 || fi > n || fj < 1.0 || fj > n) continue;
          const Cnt& c2 = t2[static_cast<std::size_t>(fi - 1.0) * n +
                             static_cast<std::size_t>(fj - 1.0)];
          const std::uint64_t tot2 = static_cast<std::uint64_t>(c2.zero) + c2.one;
          if (tot2 == 0) continue;
          const Cnt& c1 = t1[lin];
          hits += (static_cast<std::uint64_t>(c1.zero) + c1.one) * tot2;
          bads += static_cast<std::uint64_t>(c1.zero) * c2.one +
                  static_cast<std::uint64_t>(c1.one) * c2.zero;
        }
        if (static_cast<double>(hits) < hit_threshold) {
          discarded.fetch_add(1, std::memory_order_relaxed);
          return std::numeric_limits<double>::infinity();
        }
        const double bad_rate = hits > 0 ? static_cast<double>(bads) / static_cast<double>(hits)
                                         : 1.0;
        const double in_mass = n2 - static_cast<double>(out);
        return params.strict_objective
                   ? in_mass * bad_rate / n2
                   : (static_cast<double>(out) + in_mass * bad_rate) / n2;
      });

  GeneralResult r;
  r.sample_count = k;
  r.reads_m1 = v1.reads();
  r.reads_m2 = v2.reads();
  r.discarded = static_cast<std::size_t>(discarded.load());
  if (std::isinf(hit.value)) {
    // every candidate discarded: fall back to a map sending all pixels out
    r.all_discarded = true;
    r.candidate_index = candidates.size();
    r.map = AffineMap2D::translation(2.0 * n + 2.0, 2.0 * n + 2.0);
    r.distance = 1.0;
    return r;
  }
  r.candidate_index = static_cast<std::size_t>(hit.index);
  r.map = candidates[hit.index];
  r.distance = hit.value;
  return r;
}

// --- exhaustive-search oracles ---

namespace {

void check_work_cap(std::uint64_t members, int n, int dim_power, double work_cap) {
  double work = static_cast<double>(members);
  for (int d = 0; d < dim_power; ++d) work *= n;
  if (work > work_cap) {
    throw CapacityError("exhaustive search work exceeds the configured cap");
  }
}

}  // namespace

ExhaustiveResult2D exhaustive_min_distance(const BinaryImage2D& m1, const BinaryImage2D& m2,
                                           const Cover2D& cover, double work_cap, int workers) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  check_work_cap(cover.size(), m1.n(), 2, work_cap);
  auto hit = detail::parallel_argmin(cover.size(), workers, [&](int, std::uint64_t idx) {
    return distance_under(m1, m2, cover.member(idx).map);
  });
  return {hit.index, cover.member(hit.index).map, hit.value};
}

ExhaustiveResult2D exhaustive_min_distance(const GrayImage2D& m1, const GrayImage2D& m2,
                                           const Cover2D& cover, double work_cap, int workers) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  check_work_cap(cover.size(), m1.n(), 2, work_cap);
  auto hit = detail::parallel_argmin(cover.size(), workers, [&](int, std::uint64_t idx) {
    return distance_under(m1, m2, cover.member(idx).map);
  });
  return {hit.index, cover.member(hit.index).map, hit.value};
}

ExhaustiveResultRestricted3D exhaustive_min_distance(const BinaryImage3D& m1,
                                                     const BinaryImage3D& m2,
                                                     const Cover3DRestricted& cover,
                                                     double work_cap, int workers) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  check_work_cap(cover.size(), m1.n(), 3, work_cap);
  auto hit = detail::parallel_argmin(cover.size(), workers, [&](int, std::uint64_t idx) {
    return distance_under(m1, m2, cover.member(idx).map);
  });
  return {hit.index, cover.member(hit.index).map, hit.value};
}

ExhaustiveResult3D exhaustive_min_distance(const BinaryImage3D& m1, const BinaryImage3D& m2,
                                           const Cover3DFull& cover, double work_cap,
                                           int workers) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  check_work_cap(cover.size(), m1.n(), 3, work_cap);
  auto hit = detail::parallel_argmin(cover.size(), workers, [&](int, std::uint64_t idx) {
    return distance_under(m1, m2, cover.member(idx).map);
  });
  return {hit.index, cover.member(hit.index).map, hit.value};
}

ExhaustiveResultGray exhaustive_min_distance_gray(const GrayImage2D& m1, const GrayImage2D& m2,
                                                  const Cover3DRestricted& cover,
                                                  double work_cap, int workers) {
  check_same_n(m1.n(), m2.n());
  check_same_n(m1.n(), cover.params().n);
  check_work_cap(cover.size(), m1.n(), 2, work_cap);
  const double n = cover.params().n;
  auto hit = detail::parallel_argmin(cover.size(), workers, [&](int, std::uint64_t idx) {
    const RestrictedMap3D member = cover.member(idx).map;
    const IntensityMap intensity{member.zscale, member.zshift / n};
    return distance_under(m1, m2, member.planar, intensity);
  });
  const RestrictedMap3D best = cover.member(hit.index).map;
  return {hit.index, best.planar, IntensityMap{best.zscale, best.zshift / n}, hit.value};
}

}  // namespace subpix
