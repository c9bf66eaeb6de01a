#include "borngame/exact_chain.hpp"

#include "borngame/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <string>

namespace borngame {

namespace {

using Composition = std::vector<std::int64_t>;

void enumerate_compositions(int n, std::int64_t total, Composition& current, int slot,
                            std::vector<Composition>& out) {
  if (slot == n - 1) {
    current[static_cast<std::size_t>(slot)] = total;
    out.push_back(current);
    return;
  }
  for (std::int64_t v = 0; v <= total; ++v) {
    current[static_cast<std::size_t>(slot)] = v;
    enumerate_compositions(n, total - v, current, slot + 1, out);
  }
}

int solvent_count(const Composition& c) {
  int count = 0;
  for (auto v : c) count += v > 0 ? 1 : 0;
  return count;
}

int winner_of(const Composition& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > 0) return static_cast<int>(i);
  }
  return -1;
}

bool active(const Composition& c, PairIndex p) {
  return c[static_cast<std::size_t>(p.k)] > 0 && c[static_cast<std::size_t>(p.l)] > 0;
}

double binomial(double n, double k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

std::size_t AbsorbingGameChain::CompositionHash::operator()(const Composition& v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
  return h;
}

AbsorbingGameChain::AbsorbingGameChain(int n, std::int64_t total, ChainKind kind, std::size_t max_states)
    : n_(n), total_(total), kind_(kind), schedule_(all_pairs(n)) {
  if (n < 2) throw std::invalid_argument("need at least two gamblers");
  if (total < 1) throw std::invalid_argument("total fortune must be at least 1");

  const double per_comp = kind == ChainKind::scheduled ? static_cast<double>(schedule_.size()) : 1.0;
  const double bound = binomial(static_cast<double>(total + n - 1), static_cast<double>(n - 1)) * per_comp;
  if (bound > static_cast<double>(max_states) * (1.0 + 1e-9)) {
    throw StateSpaceTooLarge("chain would have up to " + std::to_string(static_cast<long long>(bound)) +
                             " states, limit " + std::to_string(max_states));
  }

  std::vector<Composition> all;
  Composition scratch(static_cast<std::size_t>(n), 0);
  enumerate_compositions(n, total, scratch, 0, all);

  const Eigen::Index rows_per = kind == ChainKind::scheduled ? static_cast<Eigen::Index>(schedule_.size()) : 1;
  std::vector<Composition> transient;
  for (auto& c : all) {
    if (solvent_count(c) >= 2) {
      block_start_.emplace(c, static_cast<Eigen::Index>(transient.size()) * rows_per);
      transient.push_back(std::move(c));
    }
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(transient.size()) * rows_per;
  state_count_ = static_cast<std::size_t>(dim);

  const Eigen::Index rounds_col = n;
  const Eigen::Index duels_col = n + 1;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, n + 2);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * 3);

  // Adds `weight` times the value of landing in composition `next` after the
  // duel at schedule position `pos` to the equation of `row`.
  auto add_successor = [&](Eigen::Index row, const Composition& next, int pos, double weight) {
    if (solvent_count(next) < 2) {
      rhs(row, winner_of(next)) += weight;
      return;
    }
    if (kind_ == ChainKind::reduced) {
      entries.emplace_back(row, block_start_.at(next), -weight);
      return;
    }
    for (int r = pos + 1; r < static_cast<int>(schedule_.size()); ++r) {
      if (active(next, schedule_[static_cast<std::size_t>(r)])) {
        entries.emplace_back(row, block_start_.at(next) + r, -weight);
        return;
      }
    }
    // Round over: a new one starts at the first active pair.
    rhs(row, rounds_col) += weight;
    for (int r = 0; r < static_cast<int>(schedule_.size()); ++r) {
      if (active(next, schedule_[static_cast<std::size_t>(r)])) {
        entries.emplace_back(row, block_start_.at(next) + r, -weight);
        return;
      }
    }
  };

  for (const auto& c : transient) {
    const Eigen::Index base = block_start_.at(c);
    for (Eigen::Index slot = 0; slot < rows_per; ++slot) {
      const Eigen::Index row = base + slot;
      entries.emplace_back(row, row, 1.0);
      std::vector<std::pair<PairIndex, int>> moves;
      if (kind_ == ChainKind::scheduled) {
        const PairIndex p = schedule_[static_cast<std::size_t>(slot)];
        // Rows for inactive pairs are never reached; they stay as x = 0.
        if (!active(c, p)) continue;
        moves.emplace_back(p, static_cast<int>(slot));
      } else {
        for (const auto& p : schedule_) {
          if (active(c, p)) moves.emplace_back(p, -1);
        }
      }
      const double weight = 0.5 / static_cast<double>(moves.size());
      rhs(row, duels_col) = 1.0;
      for (const auto& [p, pos] : moves) {
        Composition up = c;
        ++up[static_cast<std::size_t>(p.k)];
        --up[static_cast<std::size_t>(p.l)];
        Composition down = c;
        --down[static_cast<std::size_t>(p.k)];
        ++down[static_cast<std::size_t>(p.l)];
        add_successor(row, up, pos, weight);
        add_successor(row, down, pos, weight);
      }
    }
  }

  if (dim == 0) {
    solution_.resize(0, n + 2);
    return;
  }
  Eigen::SparseMatrix<double> system(dim, dim);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(system);
  lu.factorize(system);
  if (lu.info() != Eigen::Success) throw SolverNotConverged("sparse LU factorization failed: " + lu.lastErrorMessage());
  solution_ = lu.solve(rhs);

  // Measure residual column-wise: absolute for probabilities, relative for
  // the time columns whose magnitude grows like N0^2. One refinement pass.
  auto residual_of = [&](const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd r = system * x - rhs;
    double worst = 0.0;
    for (Eigen::Index col = 0; col < r.cols(); ++col) {
      const double scale = col < n ? 1.0 : std::max(1.0, x.col(col).cwiseAbs().maxCoeff());
      worst = std::max(worst, r.col(col).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
  };
  residual_ = residual_of(solution_);
  if (residual_ > 1e-12) {
    solution_ -= lu.solve(Eigen::MatrixXd(system * solution_ - rhs));
    residual_ = residual_of(solution_);
  }
  if (residual_ > 1e-12) {
    throw SolverNotConverged("absorption solve residual " + std::to_string(residual_) + " above 1e-12");
  }
}

std::optional<Eigen::Index> AbsorbingGameChain::row_of(const Composition& comp, int pair_pos) const {
  const auto it = block_start_.find(comp);
  if (it == block_start_.end()) return std::nullopt;
  return it->second + (kind_ == ChainKind::scheduled ? pair_pos : 0);
}

ExactSolution AbsorbingGameChain::solve_from(const Vector<std::int64_t>& fortunes0) const {
  if (fortunes0.size() != n_) throw std::invalid_argument("fortune vector has wrong length");
  if ((fortunes0.array() < 0).any() || fortunes0.sum() != total_) {
    throw std::invalid_argument("fortunes must be non-negative and sum to the chain total");
  }
  const Composition c(fortunes0.data(), fortunes0.data() + fortunes0.size());
  ExactSolution sol;
  sol.states = state_count_;
  sol.residual = residual_;
  sol.absorption_prob = Vector<double>::Zero(n_);
  if (solvent_count(c) < 2) {
    sol.absorption_prob(winner_of(c)) = 1.0;
    if (kind_ == ChainKind::scheduled) sol.expected_rounds = 0.0;
    return sol;
  }
  int first = 0;
  if (kind_ == ChainKind::scheduled) {
    while (!active(c, schedule_[static_cast<std::size_t>(first)])) ++first;
  }
  const Eigen::Index row = *row_of(c, first);
  for (int i = 0; i < n_; ++i) sol.absorption_prob(i) = solution_(row, i);
  sol.expected_duels = solution_(row, n_ + 1);
  if (kind_ == ChainKind::scheduled) sol.expected_rounds = 1.0 + solution_(row, n_);
  return sol;
}

ExactSolution exact_absorption_solve(const DiscreteGameConfig& config, ChainKind kind, std::size_t max_states) {
  config.validate();
  const AbsorbingGameChain chain(config.n(), config.total(), kind, max_states);
  return chain.solve_from(config.fortunes0);
}

double expected_ruin_time_two_player(std::int64_t fortune, std::int64_t total) {
  if (total < 0 || fortune < 0 || fortune > total) throw std::invalid_argument("need 0 <= fortune <= total");
  if (fortune == 0 || fortune == total) return 0.0;
  // Unknowns E_1 .. E_{total-1}; E_0 = E_total = 0.
  const Eigen::Index dim = total - 1;
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index j = 0; j < dim; ++j) {
    entries.emplace_back(j, j, 1.0);
    if (j > 0) entries.emplace_back(j, j - 1, -0.5);
    if (j + 1 < dim) entries.emplace_back(j, j + 1, -0.5);
  }
  Eigen::SparseMatrix<double> system(dim, dim);
  system.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(system);
  if (lu.info() != Eigen::Success) throw SolverNotConverged("ruin-time factorization failed");
  const Eigen::VectorXd e = lu.solve(Eigen::VectorXd::Ones(dim));
  return e(fortune - 1);
}

}  // namespace borngame
