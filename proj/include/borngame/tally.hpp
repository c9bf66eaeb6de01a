#pragma once

#include <cstdint>

namespace borngame {

/// Running count/sum/sum-of-squares of one component's increments while it
/// was active. Pooled across trajectories for the martingale test.
struct IncrementTally {
  std::int64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) noexcept {
    ++count;
    sum += x;
    sum_sq += x * x;
  }

  IncrementTally& operator+=(const IncrementTally& other) noexcept {
    count += other.count;
    sum += other.sum;
    sum_sq += other.sum_sq;
    return *this;
  }
};

}  // namespace borngame
