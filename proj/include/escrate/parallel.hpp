#pragma once

#include <cstddef>
#include <functional>

namespace escrate {

/// Worker threads used for path-parallel loops: hardware concurrency, capped
/// by the ESCRATE_THREADS environment variable when it holds a positive
/// integer. Results never depend on this number.
std::size_t worker_count();

/// Calls body(i) for i in [0, n), split into contiguous blocks across
/// workers. If any call throws, the exception from the smallest failing
/// index is rethrown, which is also what a sequential loop would report.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace escrate
