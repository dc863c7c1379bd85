#pragma once

#include <cstddef>
#include <functional>

namespace hymn {

/// Runs body(i) for i in [0, count) on up to `threads` worker threads
/// (threads <= 1 runs inline). Work items must write to disjoint outputs;
/// callers reduce results in index order so output never depends on the
/// thread count. The first exception thrown by a work item is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace hymn
