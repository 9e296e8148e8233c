#ifndef MCCSR_PARALLEL_HPP
#define MCCSR_PARALLEL_HPP

#include <functional>

#include "mccsr/types.hpp"

namespace mccsr {

/// Resolves a thread-count request: positive values pass through, zero falls
/// back to the MCCSR_THREADS environment variable and then to the hardware
/// concurrency.
int resolve_thread_count(int requested);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out in chunks of `grain`; each index must touch only its own
/// outputs. Exceptions from workers are rethrown on the calling thread.
void parallel_for(Index count, int threads, const std::function<void(Index)>& fn,
                  Index grain = 1);

}  // namespace mccsr

#endif
