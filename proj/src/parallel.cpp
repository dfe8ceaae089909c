#include "fsw/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace fsw {

std::size_t thread_budget() {
  std::size_t budget = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("FSW_THREADS")) {
    try {
      const long requested = std::stol(cap);
      if (requested >= 1) {
        budget = std::min<std::size_t>(budget, static_cast<std::size_t>(requested));
      }
    } catch (...) {
      // unparsable cap is ignored
    }
  }
  return budget;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) {
    return;
  }
  const std::size_t workers = std::min(thread_budget(), count);
  if (workers <= 1 || count < 2) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&fn, &error = errors[w], begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
}

}  // namespace fsw
