#pragma once

#include <cstddef>
#include <functional>

namespace esurf {

/// Worker cap: ESURF_THREADS when set (minimum 1), otherwise
/// hardware_concurrency.
std::size_t thread_budget();

/// Runs fn(0..n-1) across up to thread_budget() workers. Callers must make
/// iterations independent (write to distinct slots); iteration order is
/// unspecified.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace esurf
