#pragma once

#include <cstddef>
#include <functional>

namespace lgdc {

/// Worker count: LGDC_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous blocks, so
/// callers that write only to slot i get results independent of thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lgdc
