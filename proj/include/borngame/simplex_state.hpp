#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace borngame {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

/// Tolerance on |sum - 1| accepted for real-valued inputs.
inline constexpr double kSimplexTolerance = 1e-12;

/// Unordered pair {k, l} of component indices, stored with k < l.
/// Indices are zero-based; reports shift them to one-based.
struct PairIndex {
  int k = 0;
  int l = 1;

  friend constexpr bool operator==(PairIndex, PairIndex) = default;
  friend constexpr auto operator<=>(PairIndex, PairIndex) = default;
};

constexpr Index pair_count(Index n) noexcept { return n * (n - 1) / 2; }

/// All pairs of an n-component system in lexicographic order.
std::vector<PairIndex> all_pairs(int n);

/// Diagonal of the reduced density operator in the decoherence basis.
///
/// Scalar is double for the continuous process (values on the probability
/// simplex) or an integer type for the dice game, where values are fortunes
/// in units of the money quantum and the total is N0 instead of 1.
/// A frozen component has been absorbed at zero and never moves again.
template <typename Scalar>
struct DiagonalState {
  Vector<Scalar> values;
  Mask frozen;
  double time = 0.0;

  [[nodiscard]] Index size() const noexcept { return values.size(); }
  [[nodiscard]] Scalar total() const { return values.sum(); }
  [[nodiscard]] Index unfrozen_count() const { return (!frozen).count(); }
  [[nodiscard]] bool pair_active(PairIndex pair) const {
    return !frozen(pair.k) && !frozen(pair.l);
  }
};

using ProbabilityState = DiagonalState<double>;
using FortuneState = DiagonalState<std::int64_t>;

namespace detail {
template <typename Scalar>
void check_entries(const Vector<Scalar>& values) {
  if (values.size() < 2) throw std::invalid_argument("state needs at least two components");
  for (Index i = 0; i < values.size(); ++i) {
    if constexpr (std::floating_point<Scalar>) {
      if (!std::isfinite(values(i))) throw std::invalid_argument("state entries must be finite");
    }
    if (values(i) < Scalar(0)) {
      throw std::invalid_argument("state entry " + std::to_string(i + 1) + " is negative");
    }
  }
}
}  // namespace detail

/// Builds a state on the probability simplex. Components that start at zero
/// are frozen from the outset.
template <std::floating_point Scalar>
DiagonalState<Scalar> make_state(const Vector<Scalar>& values) {
  detail::check_entries(values);
  const Scalar sum = values.sum();
  if (std::abs(sum - Scalar(1)) > Scalar(kSimplexTolerance)) {
    throw std::invalid_argument("state entries sum to " + std::to_string(sum) + ", expected 1");
  }
  return {values, values.array() == Scalar(0), 0.0};
}

/// Integer-backed state: fortunes in money quanta, total N0 >= 1 held exactly.
template <std::integral Scalar>
DiagonalState<Scalar> make_state(const Vector<Scalar>& fortunes) {
  detail::check_entries(fortunes);
  if (fortunes.sum() < 1) throw std::invalid_argument("total fortune must be at least 1");
  return {fortunes, fortunes.array() == Scalar(0), 0.0};
}

/// Pairs whose members are both unfrozen, lexicographic.
template <typename Scalar>
std::vector<PairIndex> active_pairs(const DiagonalState<Scalar>& state) {
  std::vector<PairIndex> pairs;
  const int n = static_cast<int>(state.size());
  for (int k = 0; k < n; ++k) {
    if (state.frozen(k)) continue;
    for (int l = k + 1; l < n; ++l) {
      if (!state.frozen(l)) pairs.push_back({k, l});
    }
  }
  return pairs;
}

/// Index of the sole unfrozen component once the process has stopped.
template <typename Scalar>
std::optional<int> terminal_outcome(const DiagonalState<Scalar>& state) {
  std::optional<int> survivor;
  for (Index i = 0; i < state.size(); ++i) {
    if (state.frozen(i)) continue;
    if (survivor) return std::nullopt;
    survivor = static_cast<int>(i);
  }
  return survivor;
}

template <typename Scalar>
bool is_terminal(const DiagonalState<Scalar>& state) {
  return state.unfrozen_count() <= 1;
}

/// Checks every structural invariant; `total` is 1 for probabilities or N0.
template <typename Scalar>
bool satisfies_invariants(const DiagonalState<Scalar>& state, Scalar total, double tolerance = 0.0) {
  if (state.frozen.size() != state.size() || state.size() < 2) return false;
  if ((state.values.array() < Scalar(0)).any()) return false;
  for (Index i = 0; i < state.size(); ++i) {
    if (state.frozen(i) && state.values(i) != Scalar(0)) return false;
  }
  if (std::abs(static_cast<double>(state.total() - total)) > tolerance) return false;
  if (auto winner = terminal_outcome(state)) {
    if (std::abs(static_cast<double>(state.values(*winner) - total)) > tolerance) return false;
  }
  return state.unfrozen_count() >= 1;
}

/// Fortunes divided by N0.
inline Vector<double> probabilities(const FortuneState& state) {
  return state.values.cast<double>() / static_cast<double>(state.total());
}

}  // namespace borngame
