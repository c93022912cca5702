#pragma once

#include <cstddef>
#include <functional>

namespace wgqed {

/// Worker count used when a caller passes 0. Starts at the hardware
/// concurrency (at least 1).
std::size_t default_thread_count();
void set_default_thread_count(std::size_t threads);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means the
/// default). If any call throws, the exception from the lowest index is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace wgqed
