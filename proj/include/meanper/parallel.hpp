#pragma once

#include <cstddef>
#include <functional>

namespace meanper {

/// Worker count used by every parallel loop in the engine. 0 selects the
/// hardware concurrency. Results never depend on this value: each index
/// writes its own slot and reductions run sequentially afterwards.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, n). If any call throws, the exception from the
/// smallest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace meanper
