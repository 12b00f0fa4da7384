#pragma once

#include <cstddef>
#include <functional>

namespace nematicflow {

// Worker count used by pointwise kernels. Kernels split index ranges into
// fixed contiguous chunks and never reduce across chunks, so results do not
// depend on scheduling.
void set_thread_count(int n);
int thread_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nematicflow
