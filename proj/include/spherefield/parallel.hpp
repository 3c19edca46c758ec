#pragma once

#include <cstddef>
#include <functional>

namespace spherefield {

/// Worker count used by the Monte Carlo drivers. Defaults to the number of
/// hardware threads; 0 restores the default.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(chunk) for chunk in [0, n_chunks) on worker_count() threads.
/// Chunks are the unit of seeding and reduction, so results never depend on
/// the worker count. Exceptions thrown by body are rethrown on the caller.
void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation, used for order-stable reductions.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace spherefield
