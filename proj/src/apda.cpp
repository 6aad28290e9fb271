#include "assign/apda.hpp"

#include "assign/ttc.hpp"

namespace assign {

namespace {

void check_inputs(const Market& mk, const PriorityStructure& s,
                  const PreferenceProfile& p) {
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

}  // namespace

ApdaResult run_apda(const Market& mk, const PriorityStructure& s,
                    const PreferenceProfile& p) {
  check_inputs(mk, s, p);
  const int n = mk.n(), m = mk.m();
  ApdaResult res;
  res.allocation.assign(static_cast<size_t>(n), -1);

  std::vector<int> next(static_cast<size_t>(n), 0);  // next ranking slot to try
  std::vector<int> holder(static_cast<size_t>(m) + 1, -1);
  std::vector<bool> done(static_cast<size_t>(n), false);   // finalized at a0
  std::vector<bool> holds(static_cast<size_t>(n), false);  // tentatively held

  for (int round = 1;; ++round) {
    ApdaRoundRecord rec;
    rec.round = round;
    bool any = false;
    std::vector<std::vector<int>> applicants(static_cast<size_t>(m) + 1);
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<size_t>(i)] || holds[static_cast<size_t>(i)]) continue;
      any = true;
      Item target = p[static_cast<size_t>(i)]
                        .order()[static_cast<size_t>(next[static_cast<size_t>(i)])];
      ++next[static_cast<size_t>(i)];
      rec.applications.emplace_back(i, target);
      if (target == kOutside) {
        done[static_cast<size_t>(i)] = true;
        res.allocation[static_cast<size_t>(i)] = kOutside;
        rec.finalized_outside.push_back(i);
      } else {
        applicants[static_cast<size_t>(target)].push_back(i);
      }
    }
    if (!any) break;
    for (Item a = 1; a <= m; ++a) {
      auto& apps = applicants[static_cast<size_t>(a)];
      if (apps.empty()) continue;
      if (holder[static_cast<size_t>(a)] != -1)
        apps.push_back(holder[static_cast<size_t>(a)]);
      int best = top_agent(s.of(a), apps);
      for (int i : apps) {
        if (i == best) continue;
        holds[static_cast<size_t>(i)] = false;
        rec.rejected.push_back(i);
      }
      holder[static_cast<size_t>(a)] = best;
      holds[static_cast<size_t>(best)] = true;
    }
    for (Item a = 1; a <= m; ++a)
      if (holder[static_cast<size_t>(a)] != -1)
        rec.tentative_holders.emplace_back(a, holder[static_cast<size_t>(a)]);
    std::sort(rec.rejected.begin(), rec.rejected.end());
    res.rounds.push_back(std::move(rec));
    if (round > n * (m + 1) + 1)
      throw InvariantError("deferred acceptance failed to terminate");
  }
  for (Item a = 1; a <= m; ++a)
    if (holder[static_cast<size_t>(a)] != -1)
      res.allocation[static_cast<size_t>(holder[static_cast<size_t>(a)])] = a;
  return res;
}

Allocation apda_allocation(const Market& mk, const PriorityStructure& s,
                           const PreferenceProfile& p) {
  return run_apda(mk, s, p).allocation;
}

RuleEqualityResult apda_equals_fpttc(const Market& mk, const PriorityStructure& s,
                                     const PreferenceDomain& d) {
  RuleEqualityResult res;
  d.for_each_profile([&](const std::vector<int>& idx, const PreferenceProfile& p) {
    ++res.profiles_checked;
    if (apda_allocation(mk, s, p) != fpttc_allocation(mk, s, p)) {
      res.equal = false;
      res.witness_idx = idx;
      return false;
    }
    return true;
  });
  return res;
}

}  // namespace assign
