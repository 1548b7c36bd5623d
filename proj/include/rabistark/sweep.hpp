#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <string_view>
#include <thread>
#include <type_traits>
#include <vector>

#include "rabistark/model.hpp"

namespace rabistark {

/// Inclusive arithmetic grid start, start + step, ... <= stop.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// Throws ValidationError unless step > 0 and start < stop.
  void validate() const;
  /// Values are start + i * step (never accumulated), so they are reproducible.
  [[nodiscard]] std::vector<double> values() const;
};

enum class SweepParam { G, U, Kappa, Delta, Omega };

[[nodiscard]] std::string_view to_string(SweepParam p) noexcept;
/// "g", "u", "kappa", "delta", "omega" (also "capital-u" for u).
[[nodiscard]] SweepParam parse_sweep_param(std::string_view name);

/// Copy of params with the swept coupling replaced.
[[nodiscard]] ModelParams with_param(ModelParams params, SweepParam which, double value);

/// Worker count used when the caller passes 0.
[[nodiscard]] unsigned default_workers() noexcept;

/// Evaluates fn(0) .. fn(count - 1) on a bounded pool and returns the results
/// in index order. If any call throws, the exception of the lowest failing
/// index is rethrown after all workers have joined.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace rabistark
