#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hlem {

/// 1-based rank used for every percentile in the pipeline:
/// min(n, floor(p * n / 100) + 1). p = 0 selects the minimum, p = 100 the
/// maximum. Requires n >= 1 and p in [0, 100].
std::size_t percentile_rank(std::size_t n, double p);

/// Value at percentile_rank of the population; no interpolation.
double percentile(std::vector<double> population, double p);

/// Same, for a population made of `values` plus `extra_zeros` zero entries.
/// All values must be non-negative.
double percentile_with_zeros(std::vector<double> values, std::size_t extra_zeros, double p);

}  // namespace hlem
