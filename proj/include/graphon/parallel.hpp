#pragma once

#include <functional>

namespace graphon::par {

/// Worker count used by parallel loops. 0 = hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs f(block) for block in [0, blocks). Which worker runs which block is
/// nondeterministic; callers must write per-block results into preallocated
/// slots and combine them in block order so the outcome does not depend on
/// the worker count.
void run_blocks(int blocks, const std::function<void(int)>& f);

}  // namespace graphon::par
