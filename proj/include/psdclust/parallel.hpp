#pragma once

#include <functional>

namespace psdclust {

// Runs body(0..count-1) on up to `threads` workers. The caller must make the
// result independent of execution order (e.g. one output slot per index).
// The first exception thrown by a body is rethrown on the calling thread.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace psdclust
