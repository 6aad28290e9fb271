#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "assign/core.hpp"

namespace assign {

struct WeakCycleWitness {
  std::array<int, 3> agents;
  std::array<Item, 3> objects;
  bool operator==(const WeakCycleWitness&) const = default;
};

struct ErginCycleWitness {
  std::array<int, 3> agents;
  std::array<Item, 2> objects;
  bool operator==(const ErginCycleWitness&) const = default;
};

struct PriorityCycleWitness {
  WeakCycleWitness core;
  std::vector<std::pair<int, Item>> support;
};

bool weak_cycle_valid(const PriorityStructure& s, const WeakCycleWitness& w);
bool ergin_cycle_valid(const PriorityStructure& s, const ErginCycleWitness& w);
bool priority_cycle_valid(const Market& mk, const PriorityStructure& s,
                          const PriorityCycleWitness& w);

// none <=> strongly acyclic; first witness in lexicographic (agents, objects)
// order by market declaration indices.
std::optional<WeakCycleWitness> find_weak_cycle(const Market& mk,
                                                const PriorityStructure& s);

// none <=> Ergin-acyclic.
std::optional<ErginCycleWitness> find_ergin_cycle(const Market& mk,
                                                  const PriorityStructure& s);

// none <=> acyclic. Backtracking search over supporting (agent, object) pairs;
// the top-of-every-column branch of the definition is the empty support.
std::optional<PriorityCycleWitness> find_priority_cycle(const Market& mk,
                                                        const PriorityStructure& s);

// Exhaustive independent oracle; n, |A| <= 7.
std::optional<PriorityCycleWitness> find_priority_cycle_bruteforce(
    const Market& mk, const PriorityStructure& s);

struct DualDictatorshipResult {
  bool holds = true;
  std::vector<int> agents_witness;
  std::vector<Item> objects_witness;
};

// |top_owner_set| <= 2 for every nonempty pair of subsets.
DualDictatorshipResult is_dual_dictatorship(const Market& mk,
                                            const PriorityStructure& s);

struct RankConditionResult {
  bool holds = true;
  int agent = -1;
  Item object_a = -1, object_b = -1;
};

// rank(i, >_a) <= |A|-2 implies rank(i, >_a) = rank(i, >_b), all a, b, i.
RankConditionResult wsd_rank_condition(const Market& mk,
                                       const PriorityStructure& s);

// All priority orders identical.
bool is_serial_dictatorship(const PriorityStructure& s);

}  // namespace assign
