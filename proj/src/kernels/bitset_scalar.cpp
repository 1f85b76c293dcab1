#include <bit>

#include "hlem/kernels/bitset.hpp"

namespace hlem::kernels::scalar {

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  std::uint64_t n = 0;
  for (std::uint64_t w : words) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

OverlapCounts overlap(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  OverlapCounts out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    out.union_count += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
  }
  return out;
}

void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= src[i];
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}

}  // namespace hlem::kernels::scalar
