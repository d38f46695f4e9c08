#pragma once

#include <cstddef>
#include <functional>

namespace ssflow {

/// Worker count for intra-run parallel loops; 0 selects all hardware threads.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count). Iterations must write disjoint outputs;
/// no reduction happens here, so results never depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ssflow
