#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "assign/core.hpp"

namespace assign {

struct StepRecord {
  int step = 0;  // 1-based
  std::vector<int> remaining_agents;
  std::vector<Item> remaining_objects;
  // ownership[i] lists the objects owned by agent i this step (empty if i is
  // not remaining or owns nothing).
  std::vector<std::vector<Item>> ownership;
  std::vector<int> pointer;  // pointer[i] = agent pointed to; -1 if absent
  std::vector<std::vector<int>> cycles;  // each starts at its smallest agent
  std::vector<int> assigned_agents;
  std::vector<Item> assigned_objects;
  std::vector<std::pair<int, Item>> assignments;
};

struct FpttcTrace {
  std::vector<StepRecord> steps;
  Allocation allocation;
};

struct TtcRoundResult {
  std::vector<int> pointer;  // -1 for agents outside the round
  std::vector<std::vector<int>> cycles;
  std::vector<std::pair<int, Item>> assignments;
};

// One TTC round over explicit endowments. Agents participating are those with
// an entry in `owners` plus any listed in `extra_agents` (ownerless agents
// still point and may self-assign the outside option).
TtcRoundResult ttc_round(const Market& mk,
                         const std::vector<std::pair<int, std::vector<Item>>>& owners,
                         const PreferenceProfile& prefs,
                         const std::vector<int>& extra_agents = {});

FpttcTrace run_fpttc(const Market& mk, const PriorityStructure& s,
                     const PreferenceProfile& p);

// Allocation-only fast path.
Allocation fpttc_allocation(const Market& mk, const PriorityStructure& s,
                            const PreferenceProfile& p);

// Runs the rule calling on_step(step, agent_mask, object_mask) before each
// round; stop early by returning false (allocation then partial, with -1 for
// unassigned agents). Markets limited to 63 agents/objects.
Allocation fpttc_run_steps(
    const Market& mk, const PriorityStructure& s, const PreferenceProfile& p,
    const std::function<bool(int, std::uint64_t, std::uint64_t)>& on_step);

// Tabulates the rule over a finite domain in enumeration order.
std::vector<std::pair<PreferenceProfile, Allocation>> run_rule(
    const Market& mk, const PriorityStructure& s, const PreferenceDomain& d);

}  // namespace assign
