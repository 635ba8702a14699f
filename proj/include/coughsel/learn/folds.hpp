#pragma once

#include <cstdint>
#include <vector>

#include "coughsel/common.hpp"

namespace coughsel::learn {

/// Fold index in [0, k) for every sample.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::size_t> assignments;

  std::vector<std::size_t> test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] == fold) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] != fold) out.push_back(i);
    return out;
  }
};

/// Shuffles each class with the seed, then deals its members round-robin
/// over the folds. The dealing position carries over between classes so fold
/// sizes stay within one of each other; per fold, each class count is the
/// floor or ceiling of its proportional share.
inline FoldPlan stratified_kfold(const std::vector<int>& labels, std::size_t k, std::uint64_t seed = kDefaultSeed) {
  if (k < 2) throw InputError("stratified_kfold: k must be at least 2");
  FoldPlan plan{k, seed, std::vector<std::size_t>(labels.size())};
  Rng rng(seed);
  std::size_t dealer = 0;
  for (int cls : {1, 0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    if (members.empty()) continue;
    if (members.size() < k)
      throw InputError("stratified_kfold: class " + std::to_string(cls) + " has " + std::to_string(members.size()) +
                       " samples, fewer than k = " + std::to_string(k));
    rng.shuffle(members);
    for (std::size_t idx : members) plan.assignments[idx] = dealer++ % k;
  }
  return plan;
}

}  // namespace coughsel::learn
