#pragma once

#include "borngame/continuous_sde.hpp"
#include "borngame/discrete_game.hpp"
#include "borngame/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

namespace borngame {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs `simulate(index, rng)` for index in [0, runs) across `workers`
/// threads (0 = hardware concurrency). Trajectory i always uses the stream
/// seeded by substream_seed(master_seed, i) and lands at position i, so the
/// output is independent of the worker count.
template <typename Simulate>
auto run_ensemble(std::int64_t runs, int workers, std::uint64_t master_seed, Simulate&& simulate) {
  using Result = std::invoke_result_t<Simulate&, std::int64_t, Rng&>;
  if (runs < 0) throw std::invalid_argument("runs must be non-negative");
  std::vector<Result> results(static_cast<std::size_t>(runs));
  const int threads = static_cast<int>(std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(runs, 1)));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));

  auto worker = [&](int w) {
    try {
      for (std::int64_t i = w; i < runs; i += threads) {
        Rng rng(substream_seed(master_seed, static_cast<std::uint64_t>(i)));
        results[static_cast<std::size_t>(i)] = simulate(i, rng);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

inline std::vector<DiscreteTrajectory> run_discrete_ensemble(const DiscreteGameConfig& config, std::int64_t runs,
                                                             int workers, std::int64_t sample_every = 0) {
  config.validate();
  return run_ensemble(runs, workers, config.seed,
                      [&](std::int64_t, Rng& rng) { return run_game(config, rng, sample_every); });
}

inline std::vector<ContinuousTrajectory> run_continuous_ensemble(const ContinuousConfig& config, std::int64_t runs,
                                                                  int workers, std::int64_t sample_every = 0) {
  config.validate();
  return run_ensemble(runs, workers, config.seed,
                      [&](std::int64_t, Rng& rng) { return run_sde(config, rng, sample_every); });
}

}  // namespace borngame
