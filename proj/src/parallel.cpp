#include "borno/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

#include "borno/error.hpp"

namespace borno {

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("BORNO_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{default_threads()};
  return n;
}

// Set inside workers so nested calls run inline instead of oversubscribing.
thread_local bool in_worker = false;

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DescriptorMismatch: return "descriptor-mismatch";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::InvalidInput: return "invalid-input";
  }
  return "unknown";
}

void set_thread_count(unsigned n) { thread_setting() = std::max(1u, n); }

unsigned thread_count() { return thread_setting(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = in_worker ? 1 : std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      in_worker = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace borno
