#pragma once

#include <stdexcept>
#include <string>

namespace borngame {

// Step or round cap hit before absorption. Absorption is almost sure, so this
// points at a bug or a pathological configuration.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverNotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace borngame
