#include "stein_lasso/folds.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "stein_lasso/error.hpp"

namespace stein {

std::vector<Fold> kfold_split(std::size_t n, std::size_t K, Rng& rng) {
  if (K < 2 || K > n) {
    throw Error(ErrorCode::InvalidK, "K must satisfy 2 <= K <= n (K=" + std::to_string(K) +
                                         ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Fold> folds(K);
  for (std::size_t i = 0; i < n; ++i) folds[i % K].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Fold complement(const Fold& fold, std::size_t n) {
  std::vector<bool> held(n, false);
  for (const auto i : fold) held[i] = true;
  Fold rest;
  rest.reserve(n - fold.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!held[i]) rest.push_back(i);
  }
  return rest;
}

}  // namespace stein
