#pragma once

#include <cstdint>
#include <optional>

#include "assign/audit.hpp"
#include "assign/core.hpp"
#include "assign/mechanism.hpp"

namespace assign {

enum SearchProp : unsigned {
  kReqSimple = 1u,
  kReqOsp = 2u,
  kReqSosp = 4u,
};

struct SearchOutcome {
  std::optional<Mechanism> mechanism;
  std::uint64_t states_explored = 0;
};

// Decides whether some mechanism with the required properties implements the
// rule on the domain, synthesizing one if so. Existence recursion on per-agent
// possible-preference sets: a state is a leaf iff the rule is constant there;
// otherwise some mover and some partition of her set into >= 2 blocks must
// pass the local dominance checks and all child states must succeed.
// allow_single_edge additionally permits burning a move on an unsplit set
// (meaningful only when simplicity is required; used by the differential
// completeness test).
SearchOutcome search_mechanism(const Market& mk, const PreferenceDomain& d,
                               const Rule& rule, unsigned require,
                               std::uint64_t profile_limit = 4096,
                               bool allow_single_edge = false);

bool sosp_implementable_fpttc(const Market& mk, const PriorityStructure& s,
                              const PreferenceDomain& d,
                              std::uint64_t profile_limit = 4096);

bool simple_osp_implementable(const Market& mk, const PreferenceDomain& d,
                              const Rule& rule,
                              std::uint64_t profile_limit = 4096);

}  // namespace assign
