#pragma once

#include <cstdint>
#include <vector>

namespace bootpls {

/// Fold label per observation from a seeded permutation; fold sizes differ by
/// at most one.
std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed);

/// Row indices split into (training, held-out) for one fold.
struct FoldSplit {
  std::vector<int> train;
  std::vector<int> test;
};

FoldSplit fold_split(const std::vector<int>& assignment, int fold);

}  // namespace bootpls
