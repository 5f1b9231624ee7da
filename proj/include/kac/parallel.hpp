#pragma once

#include <cstddef>
#include <functional>

namespace kac {

// Worker count: hardware concurrency, capped by KAC_SPECTRAL_THREADS when set.
unsigned thread_count();

// Runs body(i) for i in [begin, end). Each index is handled by exactly one worker,
// so results written per index are independent of the thread count.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

} // namespace kac
