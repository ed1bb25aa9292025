#pragma once

#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

namespace subpix::detail {

struct ArgminHit {
  std::uint64_t index = 0;
  double value = std::numeric_limits<double>::infinity();
};

// Minimizes eval(worker, index) over index in [0, count); ties go to the
// lowest index. Indices are split into contiguous per-worker chunks, each
// worker keeps a local best (strict < keeps the first, i.e. lowest, index)
// and chunks are merged in index order, so the result and any per-worker
// side effects' totals are independent of the worker count and scheduling.
template <class Eval>
ArgminHit parallel_argmin(std::uint64_t count, int workers, Eval&& eval) {
  if (workers < 1) workers = 1;
  if (static_cast<std::uint64_t>(workers) > count && count > 0) {
    workers = static_cast<int>(count);
  }
  auto run = [&eval](int w, std::uint64_t begin, std::uint64_t end) {
    ArgminHit best;
    for (std::uint64_t i = begin; i < end; ++i) {
      double v = eval(w, i);
      if (v < best.value) best = {i, v};
    }
    return best;
  };
  if (workers == 1) return run(0, 0, count);
  std::vector<ArgminHit> local(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t base = count / workers, rem = count % workers;
  std::uint64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t end = begin + base + (static_cast<std::uint64_t>(w) < rem ? 1 : 0);
    pool.emplace_back([&local, &run, w, begin, end] { local[w] = run(w, begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
  ArgminHit best = local[0];
  for (int w = 1; w < workers; ++w) {
    if (local[w].value < best.value) best = local[w];
  }
  return best;
}

}  // namespace subpix::detail
