#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

namespace dynmis {

enum class Execution { Serial, Parallel };

/// Runs fn(i) for every trial index in [0, count) and returns the results in
/// index order. Each trial must derive all of its randomness from its index,
/// so the serial reference and the OpenMP kernel return identical vectors.
template <class Result, class Fn>
std::vector<Result> run_trials_serial(std::size_t count, Fn&& fn) {
  std::vector<Result> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

template <class Result, class Fn>
std::vector<Result> run_trials_parallel(std::size_t count, Fn&& fn) {
  std::vector<Result> out(count);
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(dynmis_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class Result, class Fn>
std::vector<Result> run_trials(std::size_t count, Fn&& fn, Execution exec = Execution::Parallel) {
  if (exec == Execution::Serial) return run_trials_serial<Result>(count, fn);
  return run_trials_parallel<Result>(count, fn);
}

}  // namespace dynmis
