#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace commusage {

/// Splits [0, n) into at most `jobs` contiguous chunks and runs
/// `fn(chunk, begin, end)` for each, one thread per chunk. Chunk boundaries
/// depend only on (n, jobs). The first exception thrown by a worker is
/// rethrown after all workers have joined.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t chunk = 0; chunk < jobs; ++chunk) {
      const std::size_t begin = n * chunk / jobs;
      const std::size_t end = n * (chunk + 1) / jobs;
      workers.emplace_back([&, chunk, begin, end] {
        try {
          fn(chunk, begin, end);
        } catch (...) {
          errors[chunk] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace commusage
