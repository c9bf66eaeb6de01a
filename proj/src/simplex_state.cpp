#include "borngame/simplex_state.hpp"

namespace borngame {

std::vector<PairIndex> all_pairs(int n) {
  std::vector<PairIndex> pairs;
  pairs.reserve(static_cast<std::size_t>(pair_count(n)));
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) pairs.push_back({k, l});
  }
  return pairs;
}

}  // namespace borngame
