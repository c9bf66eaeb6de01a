#pragma once

#include "borngame/discrete_game.hpp"
#include "borngame/simplex_state.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace borngame {

struct ExactSolution {
  Vector<double> absorption_prob;         // per-gambler win probability
  std::optional<double> expected_rounds;  // only defined for the scheduled chain
  double expected_duels = 0.0;            // expected number of played sub-rounds
  std::size_t states = 0;                 // transient states in the chain
  double residual = 0.0;                  // max |A x - b| of the linear solve
};

/// How the dice game is turned into a Markov chain.
///  - scheduled: state is (fortunes, position in the round's pair schedule),
///    reproducing the simulator move for move, mid-round freezing included.
///  - reduced: state is the fortunes alone and each step a uniformly chosen
///    active pair duels. Same win law, different clock.
enum class ChainKind { scheduled, reduced };

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

/// Absorbing chain over every composition of N0 quanta into n gamblers,
/// solved once with sparse LU for all starting points.
class AbsorbingGameChain {
 public:
  AbsorbingGameChain(int n, std::int64_t total, ChainKind kind = ChainKind::scheduled,
                     std::size_t max_states = kDefaultMaxStates);

  [[nodiscard]] ExactSolution solve_from(const Vector<std::int64_t>& fortunes0) const;

  [[nodiscard]] int gamblers() const noexcept { return n_; }
  [[nodiscard]] std::int64_t total() const noexcept { return total_; }
  [[nodiscard]] std::size_t state_count() const noexcept { return state_count_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  struct CompositionHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept;
  };

  [[nodiscard]] std::optional<Eigen::Index> row_of(const std::vector<std::int64_t>& comp, int pair_pos) const;

  int n_;
  std::int64_t total_;
  ChainKind kind_;
  std::vector<PairIndex> schedule_;
  // Composition -> first row of its block; rows of a composition are laid
  // out one per schedule position (scheduled) or a single row (reduced).
  std::unordered_map<std::vector<std::int64_t>, Eigen::Index, CompositionHash> block_start_;
  std::size_t state_count_ = 0;
  Eigen::MatrixXd solution_;  // columns: n win probabilities, extra rounds, duels
  double residual_ = 0.0;
};

/// Exact win probabilities and expected rounds of the dice game.
ExactSolution exact_absorption_solve(const DiscreteGameConfig& config, ChainKind kind = ChainKind::scheduled,
                                     std::size_t max_states = kDefaultMaxStates);

/// Expected number of duels before one of two gamblers is ruined, from a
/// linear solve of the first-step equations E_j = 1 + (E_{j-1} + E_{j+1}) / 2.
double expected_ruin_time_two_player(std::int64_t fortune, std::int64_t total);

}  // namespace borngame
