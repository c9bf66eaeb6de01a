#include "borngame/discrete_game.hpp"

#include "borngame/errors.hpp"

namespace borngame {

DuelWinner dice_duel(Rng& rng, int dice_faces) {
  if (dice_faces < 2) throw std::invalid_argument("dice need at least two faces");
  return resolve_duel([&] { return rng.uniform_int(1, dice_faces); });
}

void DiscreteGameConfig::validate() const {
  if (fortunes0.size() < 2) throw std::invalid_argument("need at least two gamblers");
  if ((fortunes0.array() < 0).any()) throw std::invalid_argument("fortunes must be non-negative");
  if (total() < 1) throw std::invalid_argument("total fortune N0 must be at least 1");
  if (dice_faces < 2) throw std::invalid_argument("dice_faces must be at least 2");
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be positive");
}

void play_round(FortuneState& state, Rng& rng, int dice_faces, GameTally* tally) {
  play_round(state, [&](PairIndex) { return dice_duel(rng, dice_faces); }, tally);
}

DiscreteTrajectory run_game(const DiscreteGameConfig& config, Rng& rng, std::int64_t sample_every) {
  config.validate();
  FortuneState state = make_state(config.fortunes0);
  DiscreteTrajectory traj;
  traj.tally = GameTally(state.size());
  if (sample_every > 0) traj.samples.push_back({0, state.values});

  std::int64_t rounds = 0;
  while (!is_terminal(state)) {
    if (rounds >= config.max_rounds) {
      throw BudgetExceeded("dice game exceeded " + std::to_string(config.max_rounds) + " rounds");
    }
    play_round(state, rng, config.dice_faces, &traj.tally);
    ++rounds;
    if (sample_every > 0 && rounds % sample_every == 0 && !is_terminal(state)) traj.samples.push_back({rounds, state.values});
  }
  if (sample_every > 0) traj.samples.push_back({rounds, state.values});

  traj.outcome = *terminal_outcome(state);
  traj.rounds = rounds;
  traj.final_fortunes = state.values;
  return traj;
}

DiscreteTrajectory run_game(const DiscreteGameConfig& config, std::int64_t sample_every) {
  Rng rng(config.seed);
  return run_game(config, rng, sample_every);
}

}  // namespace borngame
