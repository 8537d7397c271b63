#pragma once

#include <cstddef>
#include <functional>

namespace mewma {

/// Worker count used by data-parallel loops; 0 selects the hardware
/// concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(begin, end) over contiguous blocks covering [0, n).  Blocks are
/// disjoint so bodies writing to distinct indices need no locking.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mewma
