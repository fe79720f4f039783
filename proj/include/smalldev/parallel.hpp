#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace smalldev::parallel {

/// Fixed chunk length for index-range work splitting. Chunk boundaries never
/// depend on the worker count, which is what makes merged results independent
/// of it.
inline constexpr std::int64_t kChunk = 1 << 15;

/// Runs body(chunk_index) for chunk_index in [0, chunks) on up to `workers`
/// threads. Chunks are handed out dynamically; the body must write only to
/// per-chunk state.
void for_each_chunk(std::int64_t chunks, unsigned workers,
                    const std::function<void(std::int64_t)>& body);

/// Pairwise (tree) sum of values in index order.
double pairwise_sum(std::span<const double> values) noexcept;

/// Sum of term(n) for n in [first, last], computed as pairwise sums over
/// fixed chunks merged by a pairwise tree in index order. The result is
/// bit-identical for any worker count.
double deterministic_sum(std::int64_t first, std::int64_t last,
                         const std::function<double(std::int64_t)>& term, unsigned workers);

/// Clamps a requested worker count to at least 1.
unsigned effective_workers(unsigned requested) noexcept;

}  // namespace smalldev::parallel
