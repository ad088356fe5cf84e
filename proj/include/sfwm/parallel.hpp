#pragma once

#include <cstddef>
#include <functional>

namespace sfwm {

/// Worker count: hardware concurrency, capped by SFWM_LAB_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// caller owns any reduction and must not depend on visiting order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; result is independent of thread scheduling.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace sfwm
