#pragma once

#include <cstddef>
#include <vector>

#include "stein_lasso/random.hpp"

namespace stein {

using Fold = std::vector<std::size_t>;

/// Random partition of {0, ..., n-1} into K folds whose sizes differ by at
/// most one. Indices within a fold are sorted.
std::vector<Fold> kfold_split(std::size_t n, std::size_t K, Rng& rng);

/// Complement of `fold` in {0, ..., n-1}, sorted.
Fold complement(const Fold& fold, std::size_t n);

}  // namespace stein
