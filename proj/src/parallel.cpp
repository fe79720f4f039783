#include "smalldev/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace smalldev::parallel {

unsigned effective_workers(unsigned requested) noexcept { return std::max(requested, 1u); }

void for_each_chunk(std::int64_t chunks, unsigned workers,
                    const std::function<void(std::int64_t)>& body) {
  if (chunks <= 0) return;
  const auto threads = static_cast<std::int64_t>(effective_workers(workers));
  if (threads == 1 || chunks == 1) {
    for (std::int64_t c = 0; c < chunks; ++c) body(c);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      try {
        body(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::jthread> pool;
  const auto spawn = std::min(threads, chunks);
  pool.reserve(static_cast<std::size_t>(spawn));
  for (std::int64_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t base = 32;
  if (values.size() <= base) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double deterministic_sum(std::int64_t first, std::int64_t last,
                         const std::function<double(std::int64_t)>& term, unsigned workers) {
  if (last < first) return 0.0;
  const std::int64_t count = last - first + 1;
  const std::int64_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  for_each_chunk(chunks, workers, [&](std::int64_t c) {
    const std::int64_t lo = first + c * kChunk;
    const std::int64_t hi = std::min(last, lo + kChunk - 1);
    std::vector<double> values(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) values[static_cast<std::size_t>(n - lo)] = term(n);
    partial[static_cast<std::size_t>(c)] = pairwise_sum(values);
  });
  return pairwise_sum(partial);
}

}  // namespace smalldev::parallel
