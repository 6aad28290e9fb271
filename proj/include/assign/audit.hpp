#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "assign/core.hpp"

namespace assign {

struct AuditWitness {
  std::vector<int> pref_indices;  // per-agent indices into the domain
  int step = 0;
  std::string detail;
};

struct AuditReport {
  std::string property;
  bool holds = true;
  std::optional<AuditWitness> witness;
  std::uint64_t profiles_checked = 0;
};

// |top_owner_set| <= 2 at every step of every domain profile.
AuditReport check_dual_ownership(const Market& mk, const PriorityStructure& s,
                                 const PreferenceDomain& d);

// More than two remaining objects implies a single owner; domain must be the
// no-outside full domain.
AuditReport check_weak_serial_dictatorship(const Market& mk,
                                           const PriorityStructure& s,
                                           const PreferenceDomain& d);

using Rule = std::function<Allocation(const PreferenceProfile&)>;

struct RuleComparison {
  bool equal = true;
  std::optional<std::vector<int>> witness_idx;
  std::uint64_t profiles_checked = 0;
};

RuleComparison rules_equal(const Rule& rule1, const Rule& rule2,
                           const PreferenceDomain& d);

struct TheoremSweepReport {
  bool all_pass = true;
  std::uint64_t structures_checked = 0;
  std::vector<std::string> failures;
};

// Enumerates all (n!)^m priority structures and cross-checks the structural
// predicates against behavioral audits (dual ownership vs acyclicity, weak
// serial dictatorship vs the rank condition, deferred acceptance equivalence
// vs Ergin-acyclicity).
TheoremSweepReport verify_structure_theorems(int n, int m, int max_n = 3, int max_m = 3);

// All structures over the market, in lexicographic order of per-object
// permutation indices.
std::vector<PriorityStructure> all_priority_structures(const Market& mk);

}  // namespace assign
