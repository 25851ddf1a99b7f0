#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace toponet {

// Runs jobs across `workers` threads. Results land in the slot matching the
// job index, so aggregation order never depends on scheduling. The first
// failing job's exception (by index) is rethrown after all threads join.
template <class R>
std::vector<R> run_parallel(const std::vector<std::function<R()>>& jobs,
                            int workers) {
  std::vector<R> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(workers, static_cast<int>(jobs.size()));
  pool.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace toponet
