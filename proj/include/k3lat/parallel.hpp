#pragma once

#include <cstddef>
#include <functional>

namespace k3lat {

// K3LAT_THREADS if set and positive, else the hardware concurrency.
std::size_t kernel_threads();

// Runs fn(i) for i in [0, count) on up to kernel_threads() workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace k3lat
