#include "bootpls/folds.h"

#include "bootpls/errors.h"
#include "bootpls/seeding.h"

#include <algorithm>
#include <numeric>

namespace bootpls {

std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed) {
  require(folds >= 2, "at least two folds are required");
  require(folds <= n, "more folds than observations");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed, Stream::Folds));
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) label[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] = pos % folds;
  return label;
}

FoldSplit fold_split(const std::vector<int>& assignment, int fold) {
  FoldSplit s;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    (assignment[i] == fold ? s.test : s.train).push_back(static_cast<int>(i));
  }
  return s;
}

}  // namespace bootpls
