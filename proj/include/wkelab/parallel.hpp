#pragma once

#include <cstddef>
#include <functional>

namespace wkl {

/// Global cap on worker threads (the CLI's --threads).  Default 1.
void set_threads(int n);
int threads();

/// Runs f(i) for i in [0, n) on up to threads() workers.  Callers write
/// per-index results and reduce them in index order, which keeps every
/// reduction independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace wkl
