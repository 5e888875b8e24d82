#include "enstro/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace enstro {

Index solver_threads() {
  Index n = static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ENSTRO_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<Index>(n, cap);
    } catch (const std::exception&) {
      // unparseable values leave the default in place
    }
  }
  return n;
}

void parallel_for(Index n, const std::function<void(Index)>& body) {
  const Index workers = std::min(solver_threads(), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const Index chunk = (n + workers - 1) / workers;
    for (Index w = 0; w < workers; ++w) {
      const Index begin = w * chunk;
      const Index end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&body, &errors, w, begin, end] {
        try {
          for (Index i = begin; i < end; ++i) body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace enstro
