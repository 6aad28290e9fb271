#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "assign/core.hpp"

namespace assign {

struct ApdaRoundRecord {
  int round = 0;  // 1-based
  std::vector<std::pair<int, Item>> applications;
  std::vector<std::pair<Item, int>> tentative_holders;  // after this round
  std::vector<int> rejected;
  std::vector<int> finalized_outside;
};

struct ApdaResult {
  Allocation allocation;
  std::vector<ApdaRoundRecord> rounds;
};

ApdaResult run_apda(const Market& mk, const PriorityStructure& s,
                    const PreferenceProfile& p);

Allocation apda_allocation(const Market& mk, const PriorityStructure& s,
                           const PreferenceProfile& p);

struct RuleEqualityResult {
  bool equal = true;
  std::optional<std::vector<int>> witness_idx;  // per-agent preference indices
  std::uint64_t profiles_checked = 0;
};

// Pointwise comparison of the deferred-acceptance and top-trading-cycles
// rules over a finite domain; first disagreement in enumeration order.
RuleEqualityResult apda_equals_fpttc(const Market& mk, const PriorityStructure& s,
                                     const PreferenceDomain& d);

}  // namespace assign
