#pragma once

#include <cstddef>
#include <functional>

namespace levy_emm {

/// Worker count from LEVY_EMM_THREADS (positive integer), else the hardware
/// concurrency, at least 1.
int configured_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; the first exception thrown is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

} // namespace levy_emm
