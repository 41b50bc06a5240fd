#pragma once

#include <functional>

namespace nibbled {

// Worker count: NB_THREADS when set to a positive integer, otherwise the
// hardware concurrency, at least 1.
int worker_count();

// Runs fn(0), ..., fn(n-1) across workers.  Worker w takes the indices with
// i % workers == w, so writes into per-index slots never race and the result
// of a slot-writing loop does not depend on the worker count.  The first
// exception by index order is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace nibbled
