#include "assign/ttc.hpp"

namespace assign {

namespace {

constexpr int kMaskLimit = 62;

void check_market_fit(const Market& mk) {
  if (mk.n() > kMaskLimit || mk.m() > kMaskLimit)
    throw ArgumentError("market too large for the rule engine");
}

void check_inputs(const Market& mk, const PriorityStructure& s,
                  const PreferenceProfile& p) {
  check_market_fit(mk);
  if (static_cast<int>(s.orders.size()) != mk.m())
    throw ArgumentError("priority structure does not match the market");
  for (const auto& o : s.orders)
    if (o.num_agents() != mk.n())
      throw ArgumentError("priority order does not cover the agents");
  if (static_cast<int>(p.size()) != mk.n())
    throw ArgumentError("profile does not match the market");
  for (const auto& pr : p)
    if (pr.num_items() != mk.m() + 1)
      throw ArgumentError("preference does not cover the items");
}

// Pointer target for agent i: owner of her best acceptable remaining object,
// or i itself when nothing remaining is acceptable.
int pointer_target(const Preference& pref, int self, std::uint64_t object_mask,
                   const std::vector<int>& owner_of) {
  for (Item it : pref.order()) {
    if (it == kOutside) return self;
    if (object_mask & (1ull << it)) return owner_of[static_cast<size_t>(it)];
  }
  return self;
}

Item round_assignment(const Preference& pref, std::uint64_t object_mask) {
  for (Item it : pref.order()) {
    if (it == kOutside) return kOutside;
    if (object_mask & (1ull << it)) return it;
  }
  return kOutside;
}

struct RoundOut {
  std::vector<int> pointer;               // indexed by agent, -1 absent
  std::vector<std::vector<int>> cycles;   // sorted by smallest member
  std::vector<std::pair<int, Item>> assignments;
};

RoundOut run_round(const Market& mk, const PreferenceProfile& p,
                   std::uint64_t agent_mask, std::uint64_t object_mask,
                   const std::vector<int>& owner_of) {
  RoundOut out;
  out.pointer.assign(static_cast<size_t>(mk.n()), -1);
  for (int i = 0; i < mk.n(); ++i)
    if (agent_mask & (1ull << i))
      out.pointer[static_cast<size_t>(i)] =
          pointer_target(p[static_cast<size_t>(i)], i, object_mask, owner_of);

  // Agents on cycles of the pointer graph.
  std::vector<int> color(static_cast<size_t>(mk.n()), 0);  // 0 new 1 open 2 done
  std::vector<bool> on_cycle(static_cast<size_t>(mk.n()), false);
  for (int i = 0; i < mk.n(); ++i) {
    if (!(agent_mask & (1ull << i)) || color[static_cast<size_t>(i)] != 0) continue;
    std::vector<int> stack;
    int cur = i;
    while (color[static_cast<size_t>(cur)] == 0) {
      color[static_cast<size_t>(cur)] = 1;
      stack.push_back(cur);
      cur = out.pointer[static_cast<size_t>(cur)];
    }
    if (color[static_cast<size_t>(cur)] == 1) {
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        on_cycle[static_cast<size_t>(*it)] = true;
        if (*it == cur) break;
      }
    }
    for (int v : stack) color[static_cast<size_t>(v)] = 2;
  }

  std::vector<bool> listed(static_cast<size_t>(mk.n()), false);
  for (int i = 0; i < mk.n(); ++i) {
    if (!on_cycle[static_cast<size_t>(i)] || listed[static_cast<size_t>(i)]) continue;
    std::vector<int> cyc;
    int cur = i;
    do {
      cyc.push_back(cur);
      listed[static_cast<size_t>(cur)] = true;
      cur = out.pointer[static_cast<size_t>(cur)];
    } while (cur != i);
    out.cycles.push_back(std::move(cyc));
  }

  for (const auto& cyc : out.cycles)
    for (int i : cyc)
      out.assignments.emplace_back(
          i, round_assignment(p[static_cast<size_t>(i)], object_mask));
  return out;
}

}  // namespace

TtcRoundResult ttc_round(const Market& mk,
                         const std::vector<std::pair<int, std::vector<Item>>>& owners,
                         const PreferenceProfile& prefs,
                         const std::vector<int>& extra_agents) {
  check_market_fit(mk);
  if (static_cast<int>(prefs.size()) != mk.n())
    throw ArgumentError("profile does not match the market");
  std::uint64_t agent_mask = 0, object_mask = 0;
  std::vector<int> owner_of(static_cast<size_t>(mk.m()) + 1, -1);
  for (const auto& [agent, objs] : owners) {
    if (agent < 0 || agent >= mk.n()) throw ArgumentError("unknown owner agent");
    agent_mask |= 1ull << agent;
    for (Item it : objs) {
      if (it < 1 || it > mk.m()) throw ArgumentError("unknown owned object");
      if (owner_of[static_cast<size_t>(it)] != -1)
        throw InvariantError("ownership sets overlap");
      owner_of[static_cast<size_t>(it)] = agent;
      object_mask |= 1ull << it;
    }
  }
  for (int i : extra_agents) {
    if (i < 0 || i >= mk.n()) throw ArgumentError("unknown agent");
    agent_mask |= 1ull << i;
  }

  RoundOut r = run_round(mk, prefs, agent_mask, object_mask, owner_of);
  return TtcRoundResult{std::move(r.pointer), std::move(r.cycles),
                        std::move(r.assignments)};
}

Allocation fpttc_run_steps(
    const Market& mk, const PriorityStructure& s, const PreferenceProfile& p,
    const std::function<bool(int, std::uint64_t, std::uint64_t)>& on_step) {
  check_inputs(mk, s, p);
  Allocation alloc(static_cast<size_t>(mk.n()), -1);
  std::uint64_t agent_mask = (1ull << mk.n()) - 1;
  std::uint64_t object_mask = ((1ull << (mk.m() + 1)) - 1) & ~1ull;
  std::vector<int> owner_of(static_cast<size_t>(mk.m()) + 1, -1);

  for (int step = 1; agent_mask != 0 && object_mask != 0; ++step) {
    for (Item a = 1; a <= mk.m(); ++a) {
      if (!(object_mask & (1ull << a))) continue;
      const auto& ord = s.of(a).order();
      for (int cand : ord) {
        if (agent_mask & (1ull << cand)) {
          owner_of[static_cast<size_t>(a)] = cand;
          break;
        }
      }
    }
    if (on_step && !on_step(step, agent_mask, object_mask)) return alloc;
    RoundOut r = run_round(mk, p, agent_mask, object_mask, owner_of);
    for (const auto& [i, it] : r.assignments) {
      alloc[static_cast<size_t>(i)] = it;
      agent_mask &= ~(1ull << i);
      if (it != kOutside) object_mask &= ~(1ull << it);
    }
  }
  for (int i = 0; i < mk.n(); ++i)
    if (agent_mask & (1ull << i)) alloc[static_cast<size_t>(i)] = kOutside;
  return alloc;
}

Allocation fpttc_allocation(const Market& mk, const PriorityStructure& s,
                            const PreferenceProfile& p) {
  return fpttc_run_steps(mk, s, p, nullptr);
}

FpttcTrace run_fpttc(const Market& mk, const PriorityStructure& s,
                     const PreferenceProfile& p) {
  check_inputs(mk, s, p);
  FpttcTrace trace;
  std::uint64_t agent_mask = (1ull << mk.n()) - 1;
  std::uint64_t object_mask = ((1ull << (mk.m() + 1)) - 1) & ~1ull;
  trace.allocation.assign(static_cast<size_t>(mk.n()), -1);
  std::vector<int> owner_of(static_cast<size_t>(mk.m()) + 1, -1);

  for (int step = 1; agent_mask != 0 && object_mask != 0; ++step) {
    StepRecord rec;
    rec.step = step;
    rec.ownership.assign(static_cast<size_t>(mk.n()), {});
    for (int i = 0; i < mk.n(); ++i)
      if (agent_mask & (1ull << i)) rec.remaining_agents.push_back(i);
    for (Item a = 1; a <= mk.m(); ++a) {
      if (!(object_mask & (1ull << a))) continue;
      rec.remaining_objects.push_back(a);
      for (int cand : s.of(a).order()) {
        if (agent_mask & (1ull << cand)) {
          owner_of[static_cast<size_t>(a)] = cand;
          rec.ownership[static_cast<size_t>(cand)].push_back(a);
          break;
        }
      }
    }
    RoundOut r = run_round(mk, p, agent_mask, object_mask, owner_of);
    rec.pointer = r.pointer;
    rec.cycles = r.cycles;
    for (const auto& [i, it] : r.assignments) {
      rec.assigned_agents.push_back(i);
      if (it != kOutside) rec.assigned_objects.push_back(it);
      rec.assignments.emplace_back(i, it);
      trace.allocation[static_cast<size_t>(i)] = it;
      agent_mask &= ~(1ull << i);
      if (it != kOutside) object_mask &= ~(1ull << it);
    }
    std::sort(rec.assigned_agents.begin(), rec.assigned_agents.end());
    std::sort(rec.assigned_objects.begin(), rec.assigned_objects.end());
    trace.steps.push_back(std::move(rec));
  }
  for (int i = 0; i < mk.n(); ++i)
    if (agent_mask & (1ull << i)) trace.allocation[static_cast<size_t>(i)] = kOutside;
  return trace;
}

std::vector<std::pair<PreferenceProfile, Allocation>> run_rule(
    const Market& mk, const PriorityStructure& s, const PreferenceDomain& d) {
  std::vector<std::pair<PreferenceProfile, Allocation>> out;
  out.reserve(d.profile_count());
  d.for_each_profile([&](const std::vector<int>&, const PreferenceProfile& p) {
    out.emplace_back(p, fpttc_allocation(mk, s, p));
    return true;
  });
  return out;
}

}  // namespace assign
