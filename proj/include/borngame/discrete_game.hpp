#pragma once

#include "borngame/rng.hpp"
#include "borngame/simplex_state.hpp"
#include "borngame/tally.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace borngame {

enum class DuelWinner { first, second };

/// Each side rolls once; the higher face wins, ties reroll both dice.
/// `roll` returns a face value.
template <typename RollFn>
DuelWinner resolve_duel(RollFn&& roll) {
  for (;;) {
    const auto a = roll();
    const auto b = roll();
    if (a > b) return DuelWinner::first;
    if (b > a) return DuelWinner::second;
  }
}

DuelWinner dice_duel(Rng& rng, int dice_faces);

struct DiscreteGameConfig {
  Vector<std::int64_t> fortunes0;  // N^i_0, units of the money quantum 1/N0
  int dice_faces = 6;
  std::uint64_t seed = 0;
  std::int64_t max_rounds = 1'000'000'000;

  [[nodiscard]] int n() const noexcept { return static_cast<int>(fortunes0.size()); }
  [[nodiscard]] std::int64_t total() const { return fortunes0.sum(); }
  [[nodiscard]] double quantum() const { return 1.0 / static_cast<double>(total()); }

  /// Throws std::invalid_argument on a malformed configuration.
  void validate() const;
};

/// Per-gambler bookkeeping filled in by play_round.
struct GameTally {
  std::vector<std::int64_t> clocks;          // sub-rounds played, t_i / delta t
  std::vector<IncrementTally> increments;    // +-1 per played sub-round
  std::int64_t trace_checks = 0;             // sub-rounds verified to conserve N0

  explicit GameTally(Index n = 0)
      : clocks(static_cast<std::size_t>(n), 0), increments(static_cast<std::size_t>(n)) {}
};

struct DiscreteSample {
  std::int64_t round = 0;
  Vector<std::int64_t> fortunes;
};

struct DiscreteTrajectory {
  int outcome = -1;          // zero-based winner
  std::int64_t rounds = 0;   // rounds begun before absorption
  GameTally tally;
  std::vector<DiscreteSample> samples;
  Vector<std::int64_t> final_fortunes;

  [[nodiscard]] double stopping_time() const noexcept { return static_cast<double>(rounds); }
  [[nodiscard]] const std::vector<IncrementTally>& increments() const noexcept { return tally.increments; }
};

/// Plays one full round: each pair in lexicographic order duels if both
/// members are still solvent, moving one quantum from loser to winner. A
/// gambler ruined mid-round sits out the rest of it. `duel(pair)` yields the
/// winner of each duel that is actually played.
template <typename DuelSource>
void play_round(FortuneState& state, DuelSource&& duel, GameTally* tally = nullptr) {
  if (is_terminal(state)) throw std::invalid_argument("play_round on a terminal state");
  const std::int64_t total = state.total();
  const int n = static_cast<int>(state.size());
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const PairIndex pair{k, l};
      if (!state.pair_active(pair)) continue;
      const bool first_wins = duel(pair) == DuelWinner::first;
      const int winner = first_wins ? k : l;
      const int loser = first_wins ? l : k;
      state.values(winner) += 1;
      state.values(loser) -= 1;
      if (state.values(loser) == 0) state.frozen(loser) = true;
      if (state.total() != total || state.values(loser) < 0) {
        throw std::logic_error("dice game broke trace conservation");
      }
      if (tally) {
        ++tally->clocks[k];
        ++tally->clocks[l];
        tally->increments[winner].add(1.0);
        tally->increments[loser].add(-1.0);
        ++tally->trace_checks;
      }
    }
  }
  state.time += 1.0;
}

void play_round(FortuneState& state, Rng& rng, int dice_faces, GameTally* tally = nullptr);

/// Plays until one gambler holds all N0 quanta. `sample_every` > 0 records
/// the fortunes every that many rounds (plus start and end).
DiscreteTrajectory run_game(const DiscreteGameConfig& config, Rng& rng, std::int64_t sample_every = 0);

/// Same, seeded from config.seed.
DiscreteTrajectory run_game(const DiscreteGameConfig& config, std::int64_t sample_every = 0);

}  // namespace borngame
