// Compiled with -mavx2; only reached after a runtime CPU check. Uses
// builtins rather than inline library templates so no AVX2-compiled COMDAT
// can leak into the scalar path.

#include <immintrin.h>

#include "hlem/kernels/bitset.hpp"

namespace hlem::kernels::avx2 {
namespace {

// Nibble-lookup population count (Mula): per-byte counts via vpshufb, then
// horizontal byte sums into four 64-bit lanes via vpsadbw.
inline __m256i byte_counts(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline __m256i lane_sums(__m256i v) {
  return _mm256_sad_epu8(byte_counts(v), _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(acc), _mm256_extracti128_si256(acc, 1));
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store(std::uint64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

}  // namespace

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  const std::size_t n = words.size();
  const std::uint64_t* p = words.data();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, lane_sums(load(p + i)));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(p[i]));
  return total;
}

OverlapCounts overlap(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const std::size_t n = a.size();
  __m256i inter = _mm256_setzero_si256();
  __m256i uni = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va = load(a.data() + i);
    const __m256i vb = load(b.data() + i);
    inter = _mm256_add_epi64(inter, lane_sums(_mm256_and_si256(va, vb)));
    uni = _mm256_add_epi64(uni, lane_sums(_mm256_or_si256(va, vb)));
  }
  OverlapCounts out{horizontal_sum(inter), horizontal_sum(uni)};
  for (; i < n; ++i) {
    out.intersection += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i]));
    out.union_count += static_cast<std::uint64_t>(__builtin_popcountll(a[i] | b[i]));
  }
  return out;
}

void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    store(dst.data() + i, _mm256_and_si256(load(dst.data() + i), load(src.data() + i)));
  }
  for (; i < n; ++i) dst[i] &= src[i];
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    store(dst.data() + i, _mm256_or_si256(load(dst.data() + i), load(src.data() + i)));
  }
  for (; i < n; ++i) dst[i] |= src[i];
}

}  // namespace hlem::kernels::avx2
