#pragma once

#include <cstddef>
#include <functional>

namespace spectral {

/// Worker count: SCOPULA_THREADS when set to a positive integer, else hardware concurrency.
unsigned default_threads();

/// Runs task(i) for i in [0, count) on up to `threads` workers (0 = default_threads()).
/// Tasks are claimed from a shared counter; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace spectral
