#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hlem/event_log.hpp"
#include "hlem/kernels/bitset.hpp"

namespace hlem {

/// Dense bitset over the case indices [0, universe) of one log.
class CaseSet {
 public:
  CaseSet() = default;
  explicit CaseSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64) {}

  static CaseSet from_ids(std::size_t universe, std::span<const CaseIndex> ids);

  std::size_t universe() const { return universe_; }
  void insert(CaseIndex c) { words_[c >> 6] |= std::uint64_t{1} << (c & 63); }
  bool contains(CaseIndex c) const {
    return c < universe_ && ((words_[c >> 6] >> (c & 63)) & 1U) != 0;
  }
  std::size_t count() const { return static_cast<std::size_t>(kernels::popcount(words_)); }
  bool empty() const { return count() == 0; }
  /// Members in ascending order.
  std::vector<CaseIndex> ids() const;

  CaseSet& operator&=(const CaseSet& other);
  CaseSet& operator|=(const CaseSet& other);

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const CaseSet&, const CaseSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// |a ∩ b| and |a ∪ b|; both sets must share a universe.
kernels::OverlapCounts overlap(const CaseSet& a, const CaseSet& b);

/// |a ∩ b| / |a ∪ b|, defined as 0 when both sets are empty.
double jaccard(const CaseSet& a, const CaseSet& b);

}  // namespace hlem
