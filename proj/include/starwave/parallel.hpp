#pragma once

#include <cstddef>
#include <functional>

namespace starwave {

/// Worker count used by parallel_for. 0 means hardware concurrency; the
/// STARWAVE_THREADS environment variable, when set, takes precedence.
void set_threads(int count);
int threads();

/// Runs body(i) for i in [0, count) over contiguous blocks. Each index is
/// computed by exactly one worker and nothing is reduced across workers, so
/// results do not depend on the thread count.
void parallel_for(std::ptrdiff_t count, const std::function<void(std::ptrdiff_t)>& body);

}  // namespace starwave
