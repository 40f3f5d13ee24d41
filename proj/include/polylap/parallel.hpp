#pragma once

#include <cstddef>
#include <functional>

namespace polylap {

// Worker count: POLYLAP_THREADS caps it when set, otherwise the hardware
// concurrency. Never less than one.
unsigned thread_budget();

// Run fn(i) for i in [0, n), splitting the range into one contiguous block
// per worker. Runs inline when the budget is one or the range is small.
// fn must be safe to call concurrently on distinct indices; the first
// exception thrown by any worker is rethrown after all of them join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace polylap
