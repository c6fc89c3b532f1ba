#pragma once

#include <cstddef>
#include <functional>

namespace radsob {

/// Worker count: RADSOB_WORKERS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n). Nested calls run serially on the calling
/// thread. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace radsob
