// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_PARALLEL_HPP
#define KGP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace kgp
{

// Worker count: KGP_THREADS if set to a positive integer, hardware concurrency otherwise.
int thread_count();

// Calls body(i) for i in [0, n), split into contiguous blocks over thread_count() threads.
// Each index is visited exactly once, so results written per index are deterministic.
// The first exception thrown by any block is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace kgp

#endif  // KGP_PARALLEL_HPP
