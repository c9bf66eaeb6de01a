#include "borngame/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace borngame {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit span
  // 2^64 mod range; values below it would bias the modulo.
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return lo + static_cast<std::int64_t>(x % range);
  }
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

}  // namespace borngame
