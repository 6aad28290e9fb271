#include "assign/search.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <unordered_map>

#include "assign/ttc.hpp"

namespace assign {

namespace {

using PrefSet = std::vector<int>;  // sorted preference indices

struct KeyHash {
  size_t operator()(const std::vector<int>& key) const {
    size_t h = 1469598103934665603ull;
    for (int v : key) {
      h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct MemoEntry {
  bool ok = false;
  int mover = -1;  // -1 means leaf
  bool burned = false;
  std::vector<PrefSet> blocks;  // children of the chosen split
};

struct Searcher {
  const Market& mk;
  const PreferenceDomain& d;
  unsigned require;
  bool allow_single_edge;
  int n;
  std::vector<int> sizes;
  std::vector<int> strides;  // agent 0 most significant
  std::vector<Allocation> table;
  std::unordered_map<std::vector<int>, MemoEntry, KeyHash> memo;
  std::uint64_t states = 0;

  bool simple() const { return require & kReqSimple; }

  std::vector<int> key_of(const std::vector<PrefSet>& state, unsigned moved) const {
    std::vector<int> key;
    for (const auto& s : state) {
      key.push_back(static_cast<int>(s.size()));
      key.insert(key.end(), s.begin(), s.end());
    }
    if (simple()) key.push_back(static_cast<int>(moved));
    return key;
  }

  // Enumerates flat profile offsets of the opponents of `mover`.
  std::vector<int> opponent_offsets(const std::vector<PrefSet>& state,
                                    int mover) const {
    std::vector<int> offs{0};
    for (int j = 0; j < n; ++j) {
      if (j == mover) continue;
      std::vector<int> next;
      next.reserve(offs.size() * state[static_cast<size_t>(j)].size());
      for (int base : offs)
        for (int q : state[static_cast<size_t>(j)])
          next.push_back(base + q * strides[static_cast<size_t>(j)]);
      offs = std::move(next);
    }
    return offs;
  }

  bool constant_on(const std::vector<PrefSet>& state) const {
    const Allocation* first = nullptr;
    std::vector<size_t> pos(static_cast<size_t>(n), 0);
    for (;;) {
      int flat = 0;
      for (int j = 0; j < n; ++j)
        flat += state[static_cast<size_t>(j)][pos[static_cast<size_t>(j)]] *
                strides[static_cast<size_t>(j)];
      const Allocation& a = table[static_cast<size_t>(flat)];
      if (!first)
        first = &a;
      else if (a != *first)
        return false;
      int j = n - 1;
      while (j >= 0 && ++pos[static_cast<size_t>(j)] ==
                           state[static_cast<size_t>(j)].size()) {
        pos[static_cast<size_t>(j)] = 0;
        --j;
      }
      if (j < 0) return true;
    }
  }

  bool solve(const std::vector<PrefSet>& state, unsigned moved) {
    auto key = key_of(state, moved);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second.ok;
    ++states;
    MemoEntry entry;
    if (constant_on(state)) {
      entry.ok = true;
      memo.emplace(std::move(key), entry);
      return true;
    }
    for (int i = 0; i < n && !entry.ok; ++i) {
      if (simple() && (moved & (1u << i))) continue;
      const PrefSet& si = state[static_cast<size_t>(i)];
      if (si.size() >= 2 && try_splits(state, moved, i, entry)) break;
      if (allow_single_edge && simple() && solve(state, moved | (1u << i))) {
        // burn the mover's single move without splitting
        entry.ok = true;
        entry.mover = i;
        entry.burned = true;
        entry.blocks = {si};
        break;
      }
    }
    memo.emplace(std::move(key), entry);
    return entry.ok;
  }

  bool try_splits(const std::vector<PrefSet>& state, unsigned moved, int mover,
                  MemoEntry& entry) {
    const PrefSet& si = state[static_cast<size_t>(mover)];
    const int k = static_cast<int>(si.size());
    const auto& prefs = d.prefs[static_cast<size_t>(mover)];
    auto offs = opponent_offsets(state, mover);

    // outcome sets per acted preference, then rank envelopes per truth pref
    std::vector<std::uint64_t> outcomes(static_cast<size_t>(k), 0);
    for (int x = 0; x < k; ++x) {
      int add = si[static_cast<size_t>(x)] * strides[static_cast<size_t>(mover)];
      for (int base : offs)
        outcomes[static_cast<size_t>(x)] |=
            1ull << table[static_cast<size_t>(base + add)][static_cast<size_t>(mover)];
    }
    std::vector<std::vector<int>> worst(static_cast<size_t>(k),
                                        std::vector<int>(static_cast<size_t>(k)));
    auto best = worst;
    for (int t = 0; t < k; ++t) {
      const Preference& p = prefs[static_cast<size_t>(si[static_cast<size_t>(t)])];
      for (int x = 0; x < k; ++x) {
        int lo = mk.m() + 1, hi = -1;
        std::uint64_t set = outcomes[static_cast<size_t>(x)];
        while (set) {
          Item item = std::countr_zero(set);
          set &= set - 1;
          int r = p.position(item);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        best[static_cast<size_t>(t)][static_cast<size_t>(x)] = lo;
        worst[static_cast<size_t>(t)][static_cast<size_t>(x)] = hi;
      }
    }

    // prefs that cannot be separated share a block
    std::vector<int> comp(static_cast<size_t>(k));
    for (int x = 0; x < k; ++x) comp[static_cast<size_t>(x)] = x;
    std::function<int(int)> find = [&](int x) {
      while (comp[static_cast<size_t>(x)] != x) {
        comp[static_cast<size_t>(x)] =
            comp[static_cast<size_t>(comp[static_cast<size_t>(x)])];
        x = comp[static_cast<size_t>(x)];
      }
      return x;
    };
    for (int x = 0; x < k; ++x)
      for (int y = x + 1; y < k; ++y) {
        bool sep = worst[static_cast<size_t>(x)][static_cast<size_t>(x)] <=
                       best[static_cast<size_t>(x)][static_cast<size_t>(y)] &&
                   worst[static_cast<size_t>(y)][static_cast<size_t>(y)] <=
                       best[static_cast<size_t>(y)][static_cast<size_t>(x)];
        if (!sep) comp[static_cast<size_t>(find(x))] = find(y);
      }
    std::vector<std::vector<int>> comps;  // member positions, by smallest first
    {
      std::vector<int> root_of(static_cast<size_t>(k), -1);
      for (int x = 0; x < k; ++x) {
        int r = find(x);
        if (root_of[static_cast<size_t>(r)] < 0) {
          root_of[static_cast<size_t>(r)] = static_cast<int>(comps.size());
          comps.emplace_back();
        }
        comps[static_cast<size_t>(root_of[static_cast<size_t>(r)])].push_back(x);
      }
    }
    const int c = static_cast<int>(comps.size());
    if (c < 2) return false;

    // groupings of components into >= 2 blocks, restricted growth order
    std::vector<int> assign(static_cast<size_t>(c), 0);
    auto eval_grouping = [&](int groups) {
      {
        std::vector<PrefSet> blocks(static_cast<size_t>(groups));
        std::vector<std::vector<int>> block_pos(static_cast<size_t>(groups));
        for (int ci = 0; ci < c; ++ci)
          for (int x : comps[static_cast<size_t>(ci)]) {
            blocks[static_cast<size_t>(assign[static_cast<size_t>(ci)])].push_back(
                si[static_cast<size_t>(x)]);
            block_pos[static_cast<size_t>(assign[static_cast<size_t>(ci)])]
                .push_back(x);
          }
        for (auto& b : blocks) std::sort(b.begin(), b.end());

        if (require & kReqSosp) {
          for (int g = 0; g < groups; ++g) {
            for (int t : block_pos[static_cast<size_t>(g)]) {
              int w = -1;
              for (int x : block_pos[static_cast<size_t>(g)])
                w = std::max(w, worst[static_cast<size_t>(t)][static_cast<size_t>(x)]);
              for (int g2 = 0; g2 < groups; ++g2) {
                if (g2 == g) continue;
                for (int y : block_pos[static_cast<size_t>(g2)])
                  if (w > best[static_cast<size_t>(t)][static_cast<size_t>(y)])
                    return false;
              }
            }
          }
        }
        for (size_t g = 0; g < blocks.size(); ++g) {
          auto child = state;
          child[static_cast<size_t>(mover)] = blocks[g];
          if (!solve(child, moved | (simple() ? (1u << mover) : 0u))) return false;
        }
        entry.ok = true;
        entry.mover = mover;
        entry.blocks = blocks;
        return true;
      }
    };

    if (!(require & kReqSosp)) {
      // With no block-coupled condition, splitting as finely as the pairwise
      // separation allows is optimal: feasibility is monotone under shrinking
      // preference sets, so only the all-components grouping needs testing.
      for (int ci = 0; ci < c; ++ci) assign[static_cast<size_t>(ci)] = ci;
      return eval_grouping(c);
    }

    std::function<bool(int, int)> rec = [&](int pos, int groups) {
      if (pos == c) return groups >= 2 && eval_grouping(groups);
      int cap = groups + 1;
      for (int g = 0; g < cap; ++g) {
        assign[static_cast<size_t>(pos)] = g;
        if (rec(pos + 1, std::max(groups, g + 1))) return true;
      }
      return false;
    };
    return rec(1, 1);  // component 0 pinned to group 0
  }

  Mechanism reconstruct() {
    Mechanism m;
    m.market = mk;
    m.domain = d;
    int vcount = 0, lcount = 0;
    std::vector<PrefSet> root_state;
    for (int i = 0; i < n; ++i) {
      PrefSet s(static_cast<size_t>(sizes[static_cast<size_t>(i)]));
      for (size_t q = 0; q < s.size(); ++q) s[q] = static_cast<int>(q);
      root_state.push_back(std::move(s));
    }
    std::function<int(const std::vector<PrefSet>&, unsigned)> build =
        [&](const std::vector<PrefSet>& state, unsigned moved) {
          const MemoEntry& e = memo.at(key_of(state, moved));
          int idx = static_cast<int>(m.nodes.size());
          m.nodes.emplace_back();
          if (e.mover == -1) {
            int flat = 0;
            for (int j = 0; j < n; ++j)
              flat += state[static_cast<size_t>(j)].front() *
                      strides[static_cast<size_t>(j)];
            m.nodes[static_cast<size_t>(idx)].id = "l" + std::to_string(++lcount);
            m.nodes[static_cast<size_t>(idx)].alloc = table[static_cast<size_t>(flat)];
            return idx;
          }
          int mover = e.mover;
          const std::vector<PrefSet>& blocks = e.blocks;
          m.nodes[static_cast<size_t>(idx)].id = "v" + std::to_string(++vcount);
          m.nodes[static_cast<size_t>(idx)].agent = mover;
          for (const auto& b : blocks) {
            auto child = state;
            child[static_cast<size_t>(mover)] = b;
            int ei = static_cast<int>(m.edges.size());
            m.edges.emplace_back();
            m.nodes[static_cast<size_t>(idx)].out.push_back(ei);
            int to = build(child, moved | (simple() ? (1u << mover) : 0u));
            m.edges[static_cast<size_t>(ei)].from = idx;
            m.edges[static_cast<size_t>(ei)].to = to;
            m.edges[static_cast<size_t>(ei)].label = b;
          }
          return idx;
        };
    m.root = build(root_state, 0);
    return m;
  }
};

}  // namespace

SearchOutcome search_mechanism(const Market& mk, const PreferenceDomain& d,
                               const Rule& rule, unsigned require,
                               std::uint64_t profile_limit,
                               bool allow_single_edge) {
  if (d.profile_count() > profile_limit)
    throw ArgumentError("search refused: " + std::to_string(d.profile_count()) +
                        " profiles exceed the limit of " +
                        std::to_string(profile_limit));
  Searcher s{mk, d, require, allow_single_edge};
  s.n = mk.n();
  for (const auto& ps : d.prefs) s.sizes.push_back(static_cast<int>(ps.size()));
  s.strides.assign(static_cast<size_t>(s.n), 1);
  for (int i = s.n - 2; i >= 0; --i)
    s.strides[static_cast<size_t>(i)] = s.strides[static_cast<size_t>(i + 1)] *
                                        s.sizes[static_cast<size_t>(i + 1)];
  d.for_each_profile([&](const std::vector<int>&, const PreferenceProfile& p) {
    s.table.push_back(rule(p));
    return true;
  });

  std::vector<PrefSet> root;
  for (int i = 0; i < s.n; ++i) {
    PrefSet set(static_cast<size_t>(s.sizes[static_cast<size_t>(i)]));
    for (size_t q = 0; q < set.size(); ++q) set[q] = static_cast<int>(q);
    root.push_back(std::move(set));
  }
  SearchOutcome out;
  bool ok = s.solve(root, 0);
  out.states_explored = s.states;
  if (ok) out.mechanism = s.reconstruct();
  return out;
}

bool sosp_implementable_fpttc(const Market& mk, const PriorityStructure& s,
                              const PreferenceDomain& d,
                              std::uint64_t profile_limit) {
  Rule rule = [&](const PreferenceProfile& p) { return fpttc_allocation(mk, s, p); };
  return search_mechanism(mk, d, rule, kReqSosp, profile_limit)
      .mechanism.has_value();
}

bool simple_osp_implementable(const Market& mk, const PreferenceDomain& d,
                              const Rule& rule, std::uint64_t profile_limit) {
  return search_mechanism(mk, d, rule, kReqSimple | kReqOsp, profile_limit)
      .mechanism.has_value();
}

}  // namespace assign
