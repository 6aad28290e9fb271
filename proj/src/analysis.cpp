#include "assign/analysis.hpp"

#include <algorithm>
#include <bit>

namespace assign {

namespace {

bool beats_both(const PriorityOrder& o, int i, int j, int k) {
  return o.prefers(i, j) && o.prefers(i, k);
}

}  // namespace

bool weak_cycle_valid(const PriorityStructure& s, const WeakCycleWitness& w) {
  const auto& [i1, i2, i3] = w.agents;
  const auto& [a1, a2, a3] = w.objects;
  if (i1 == i2 || i1 == i3 || i2 == i3) return false;
  if (a1 == a2 || a1 == a3 || a2 == a3) return false;
  return beats_both(s.of(a1), i1, i2, i3) && beats_both(s.of(a2), i2, i1, i3) &&
         beats_both(s.of(a3), i3, i1, i2);
}

bool ergin_cycle_valid(const PriorityStructure& s, const ErginCycleWitness& w) {
  const auto& [i1, i2, i3] = w.agents;
  const auto& [a1, a2] = w.objects;
  if (i1 == i2 || i1 == i3 || i2 == i3) return false;
  if (a1 == a2) return false;
  return s.of(a1).prefers(i1, i2) && s.of(a1).prefers(i2, i3) &&
         s.of(a2).prefers(i3, i1);
}

bool priority_cycle_valid(const Market& mk, const PriorityStructure& s,
                          const PriorityCycleWitness& w) {
  std::vector<bool> agent_used(static_cast<size_t>(mk.n()), false);
  std::vector<bool> object_used(static_cast<size_t>(mk.m()) + 1, false);
  std::uint64_t support_mask = 0;
  for (int i : w.core.agents) {
    if (agent_used[static_cast<size_t>(i)]) return false;
    agent_used[static_cast<size_t>(i)] = true;
  }
  for (Item a : w.core.objects) {
    if (object_used[static_cast<size_t>(a)]) return false;
    object_used[static_cast<size_t>(a)] = true;
  }
  for (const auto& [i, a] : w.support) {
    if (agent_used[static_cast<size_t>(i)] || object_used[static_cast<size_t>(a)])
      return false;
    agent_used[static_cast<size_t>(i)] = true;
    object_used[static_cast<size_t>(a)] = true;
    support_mask |= 1ull << i;
  }
  auto contained = [&](int i, Item a) {
    for (int j : upper_contour(s.of(a), i))
      if (!(support_mask & (1ull << j))) return false;
    return true;
  };
  for (int h = 0; h < 3; ++h)
    if (!contained(w.core.agents[static_cast<size_t>(h)],
                   w.core.objects[static_cast<size_t>(h)]))
      return false;
  for (const auto& [i, a] : w.support)
    if (!contained(i, a)) return false;
  return true;
}

std::optional<WeakCycleWitness> find_weak_cycle(const Market& mk,
                                                const PriorityStructure& s) {
  const int n = mk.n(), m = mk.m();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        if (i1 == i2 || i1 == i3 || i2 == i3) continue;
        for (Item a1 = 1; a1 <= m; ++a1) {
          if (!beats_both(s.of(a1), i1, i2, i3)) continue;
          for (Item a2 = 1; a2 <= m; ++a2) {
            if (a2 == a1 || !beats_both(s.of(a2), i2, i1, i3)) continue;
            for (Item a3 = 1; a3 <= m; ++a3) {
              if (a3 == a1 || a3 == a2) continue;
              if (beats_both(s.of(a3), i3, i1, i2))
                return WeakCycleWitness{{i1, i2, i3}, {a1, a2, a3}};
            }
          }
        }
      }
  return std::nullopt;
}

std::optional<ErginCycleWitness> find_ergin_cycle(const Market& mk,
                                                  const PriorityStructure& s) {
  const int n = mk.n(), m = mk.m();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        if (i1 == i2 || i1 == i3 || i2 == i3) continue;
        for (Item a1 = 1; a1 <= m; ++a1) {
          if (!(s.of(a1).prefers(i1, i2) && s.of(a1).prefers(i2, i3))) continue;
          for (Item a2 = 1; a2 <= m; ++a2) {
            if (a2 == a1) continue;
            if (s.of(a2).prefers(i3, i1))
              return ErginCycleWitness{{i1, i2, i3}, {a1, a2}};
          }
        }
      }
  return std::nullopt;
}

namespace {

struct SupportSearch {
  const Market& mk;
  const PriorityStructure& s;
  std::uint64_t triple_agents;
  std::uint64_t used_objects;
  std::uint64_t support_agents = 0;
  std::uint64_t needed = 0;  // agents requiring a support pair
  std::vector<std::pair<int, Item>> chosen;

  bool admissible(int i, Item a, std::uint64_t& adds) {
    adds = 0;
    for (int j : upper_contour(s.of(a), i)) {
      if (triple_agents & (1ull << j)) return false;
      adds |= 1ull << j;
    }
    return true;
  }

  bool solve() {
    std::uint64_t open = needed & ~support_agents;
    if (open == 0) return true;
    int i = std::countr_zero(open);
    for (Item a = 1; a <= mk.m(); ++a) {
      if (used_objects & (1ull << a)) continue;
      std::uint64_t adds;
      if (!admissible(i, a, adds)) continue;
      std::uint64_t saved_needed = needed;
      used_objects |= 1ull << a;
      support_agents |= 1ull << i;
      needed |= adds;
      chosen.emplace_back(i, a);
      if (solve()) return true;
      chosen.pop_back();
      needed = saved_needed;
      support_agents &= ~(1ull << i);
      used_objects &= ~(1ull << a);
    }
    return false;
  }
};

}  // namespace

std::optional<PriorityCycleWitness> find_priority_cycle(const Market& mk,
                                                        const PriorityStructure& s) {
  const int n = mk.n(), m = mk.m();
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        if (i1 == i2 || i1 == i3 || i2 == i3) continue;
        for (Item a1 = 1; a1 <= m; ++a1)
          for (Item a2 = 1; a2 <= m; ++a2) {
            if (a2 == a1) continue;
            for (Item a3 = 1; a3 <= m; ++a3) {
              if (a3 == a1 || a3 == a2) continue;
              SupportSearch ss{mk, s,
                               (1ull << i1) | (1ull << i2) | (1ull << i3),
                               (1ull << a1) | (1ull << a2) | (1ull << a3)};
              std::uint64_t adds;
              bool ok = true;
              for (auto [i, a] : {std::pair<int, Item>{i1, a1}, {i2, a2}, {i3, a3}}) {
                if (!ss.admissible(i, a, adds)) {
                  ok = false;
                  break;
                }
                ss.needed |= adds;
              }
              if (!ok) continue;
              if (ss.solve()) {
                std::sort(ss.chosen.begin(), ss.chosen.end());
                return PriorityCycleWitness{{{i1, i2, i3}, {a1, a2, a3}},
                                            std::move(ss.chosen)};
              }
            }
          }
      }
  return std::nullopt;
}

std::optional<PriorityCycleWitness> find_priority_cycle_bruteforce(
    const Market& mk, const PriorityStructure& s) {
  const int n = mk.n(), m = mk.m();
  if (n > 7 || m > 7)
    throw ArgumentError("brute-force cycle search limited to 7 agents/objects");
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        if (i1 == i2 || i1 == i3 || i2 == i3) continue;
        for (Item a1 = 1; a1 <= m; ++a1)
          for (Item a2 = 1; a2 <= m; ++a2) {
            if (a2 == a1) continue;
            for (Item a3 = 1; a3 <= m; ++a3) {
              if (a3 == a1 || a3 == a2) continue;
              std::vector<int> rest_agents;
              std::vector<Item> rest_objects;
              for (int i = 0; i < n; ++i)
                if (i != i1 && i != i2 && i != i3) rest_agents.push_back(i);
              for (Item a = 1; a <= m; ++a)
                if (a != a1 && a != a2 && a != a3) rest_objects.push_back(a);
              int max_t = static_cast<int>(
                  std::min(rest_agents.size(), rest_objects.size()));
              for (int t = 0; t <= max_t; ++t) {
                // all size-t agent subsets x all ordered object t-tuples
                auto try_support = [&](const std::vector<int>& agents_sel) {
                  std::vector<Item> objs = rest_objects;
                  std::sort(objs.begin(), objs.end());
                  std::vector<bool> pick(objs.size(), false);
                  std::fill(pick.begin(), pick.begin() + t, true);
                  // iterate object subsets then permutations of each
                  do {
                    std::vector<Item> osel;
                    for (size_t k = 0; k < objs.size(); ++k)
                      if (pick[k]) osel.push_back(objs[k]);
                    std::sort(osel.begin(), osel.end());
                    do {
                      PriorityCycleWitness w{{{i1, i2, i3}, {a1, a2, a3}}, {}};
                      for (int k = 0; k < t; ++k)
                        w.support.emplace_back(agents_sel[static_cast<size_t>(k)],
                                               osel[static_cast<size_t>(k)]);
                      if (priority_cycle_valid(mk, s, w)) return std::optional(w);
                    } while (std::next_permutation(osel.begin(), osel.end()));
                  } while (std::prev_permutation(pick.begin(), pick.end()));
                  return std::optional<PriorityCycleWitness>();
                };
                // combinations of rest_agents of size t
                std::vector<int> idx(static_cast<size_t>(t));
                for (int k = 0; k < t; ++k) idx[static_cast<size_t>(k)] = k;
                for (;;) {
                  std::vector<int> agents_sel;
                  for (int k = 0; k < t; ++k)
                    agents_sel.push_back(rest_agents[static_cast<size_t>(
                        idx[static_cast<size_t>(k)])]);
                  if (auto w = try_support(agents_sel)) return w;
                  int k = t - 1;
                  while (k >= 0 && idx[static_cast<size_t>(k)] ==
                                       static_cast<int>(rest_agents.size()) - t + k)
                    --k;
                  if (k < 0) break;
                  ++idx[static_cast<size_t>(k)];
                  for (int j = k + 1; j < t; ++j)
                    idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
                }
              }
            }
          }
      }
  return std::nullopt;
}

DualDictatorshipResult is_dual_dictatorship(const Market& mk,
                                            const PriorityStructure& s) {
  const int n = mk.n(), m = mk.m();
  for (std::uint64_t am = 1; am < (1ull << n); ++am)
    for (std::uint64_t om = 1; om < (1ull << m); ++om) {
      std::vector<int> agents;
      std::vector<Item> objects;
      for (int i = 0; i < n; ++i)
        if (am & (1ull << i)) agents.push_back(i);
      for (Item a = 1; a <= m; ++a)
        if (om & (1ull << (a - 1))) objects.push_back(a);
      if (top_owner_set(s, agents, objects).size() > 2)
        return DualDictatorshipResult{false, agents, objects};
    }
  return DualDictatorshipResult{};
}

RankConditionResult wsd_rank_condition(const Market& mk,
                                       const PriorityStructure& s) {
  const int n = mk.n(), m = mk.m();
  for (Item a = 1; a <= m; ++a)
    for (Item b = 1; b <= m; ++b) {
      if (a == b) continue;
      for (int i = 0; i < n; ++i) {
        int ra = priority_rank(s.of(a), i);
        if (ra <= m - 2 && ra != priority_rank(s.of(b), i))
          return RankConditionResult{false, i, a, b};
      }
    }
  return RankConditionResult{};
}

bool is_serial_dictatorship(const PriorityStructure& s) {
  for (size_t k = 1; k < s.orders.size(); ++k)
    if (!(s.orders[k] == s.orders[0])) return false;
  return true;
}

}  // namespace assign
