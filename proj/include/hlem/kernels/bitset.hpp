#pragma once

// Word-parallel kernels over dense bitsets (case sets). Each kernel has a
// portable scalar reference and an AVX2 variant; the active variant is
// picked once at startup from CPUID and can be forced for testing or via
// HLEM_ISA=scalar|avx2.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hlem::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Variants this binary was built with and the CPU can run.
std::vector<Isa> supported_isas();
Isa active_isa();
/// Throws ContractError if `isa` is not supported.
void set_active_isa(Isa isa);

struct OverlapCounts {
  std::uint64_t intersection = 0;
  std::uint64_t union_count = 0;
  friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

// Binary kernels require equal lengths.
std::uint64_t popcount(std::span<const std::uint64_t> words);
OverlapCounts overlap(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);

namespace scalar {
std::uint64_t popcount(std::span<const std::uint64_t> words);
OverlapCounts overlap(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace scalar

#if defined(HLEM_HAVE_AVX2)
namespace avx2 {
std::uint64_t popcount(std::span<const std::uint64_t> words);
OverlapCounts overlap(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
}  // namespace avx2
#endif

}  // namespace hlem::kernels
