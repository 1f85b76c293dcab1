#include <atomic>
#include <cstdlib>
#include <string>

#include "hlem/error.hpp"
#include "hlem/kernels/bitset.hpp"

namespace hlem::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(HLEM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Isa initial_isa() {
  const bool avx2 = cpu_has_avx2();
  if (const char* forced = std::getenv("HLEM_ISA")) {
    const std::string name(forced);
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2" && avx2) return Isa::avx2;
  }
  return avx2 ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw ContractError("bitset kernels require equal word counts");
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::vector<Isa> supported_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (cpu_has_avx2()) out.push_back(Isa::avx2);
  return out;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) throw ContractError("AVX2 kernels unavailable");
  current().store(isa, std::memory_order_relaxed);
}

std::uint64_t popcount(std::span<const std::uint64_t> words) {
#if defined(HLEM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::popcount(words);
#endif
  return scalar::popcount(words);
}

OverlapCounts overlap(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  check_sizes(a.size(), b.size());
#if defined(HLEM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::overlap(a, b);
#endif
  return scalar::overlap(a, b);
}

void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  check_sizes(dst.size(), src.size());
#if defined(HLEM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::and_into(dst, src);
#endif
  scalar::and_into(dst, src);
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  check_sizes(dst.size(), src.size());
#if defined(HLEM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::or_into(dst, src);
#endif
  scalar::or_into(dst, src);
}

}  // namespace hlem::kernels
