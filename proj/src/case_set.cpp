#include "hlem/case_set.hpp"

#include <bit>

namespace hlem {

CaseSet CaseSet::from_ids(std::size_t universe, std::span<const CaseIndex> ids) {
  CaseSet out(universe);
  for (CaseIndex c : ids) {
    if (c >= universe) throw ContractError("case index outside the case universe");
    out.insert(c);
  }
  return out;
}

std::vector<CaseIndex> CaseSet::ids() const {
  std::vector<CaseIndex> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      const int bit = std::countr_zero(bits);
      out.push_back(static_cast<CaseIndex>(w * 64 + static_cast<std::size_t>(bit)));
      bits &= bits - 1;
    }
  }
  return out;
}

CaseSet& CaseSet::operator&=(const CaseSet& other) {
  if (universe_ != other.universe_) throw ContractError("case sets from different logs");
  kernels::and_into(words_, other.words_);
  return *this;
}

CaseSet& CaseSet::operator|=(const CaseSet& other) {
  if (universe_ != other.universe_) throw ContractError("case sets from different logs");
  kernels::or_into(words_, other.words_);
  return *this;
}

kernels::OverlapCounts overlap(const CaseSet& a, const CaseSet& b) {
  if (a.universe() != b.universe()) throw ContractError("case sets from different logs");
  return kernels::overlap(a.words(), b.words());
}

double jaccard(const CaseSet& a, const CaseSet& b) {
  const auto counts = overlap(a, b);
  if (counts.union_count == 0) return 0.0;
  return static_cast<double>(counts.intersection) / static_cast<double>(counts.union_count);
}

}  // namespace hlem
