#include "hlem/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hlem/error.hpp"

namespace hlem {

std::size_t percentile_rank(std::size_t n, double p) {
  if (n == 0) throw ContractError("percentile of an empty population");
  if (!(p >= 0.0 && p <= 100.0)) throw ContractError("percentile must lie in [0, 100]");
  const auto below = static_cast<std::size_t>(std::floor(p * static_cast<double>(n) / 100.0));
  return std::min(n, below + 1);
}

double percentile(std::vector<double> population, double p) {
  const std::size_t rank = percentile_rank(population.size(), p);
  auto nth = population.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(population.begin(), nth, population.end());
  return *nth;
}

double percentile_with_zeros(std::vector<double> values, std::size_t extra_zeros, double p) {
  const std::size_t rank = percentile_rank(values.size() + extra_zeros, p);
  if (rank <= extra_zeros) return 0.0;
  const std::size_t k = rank - extra_zeros - 1;
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(k);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

}  // namespace hlem
