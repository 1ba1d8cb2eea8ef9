#pragma once

#include <cstddef>
#include <functional>

namespace stac {

/// Number of worker threads to use. Controlled by the STAC_THREADS
/// environment variable: unset or 0 means hardware concurrency, any other
/// value caps the pool. Read on every call so tests can vary it.
std::size_t thread_budget();

/// Runs fn(begin, end) over disjoint contiguous sub-ranges of [0, count).
/// Every range is processed exactly once; ranges never overlap, so work that
/// only writes range-local output is bit-deterministic for any budget.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace stac
