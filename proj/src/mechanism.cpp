#include "assign/mechanism.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace assign {

int Mechanism::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

int Mechanism::pref_index(int agent, const Preference& p) const {
  const auto& ps = domain.prefs[static_cast<size_t>(agent)];
  for (size_t k = 0; k < ps.size(); ++k)
    if (ps[k] == p) return static_cast<int>(k);
  return -1;
}

namespace {

std::vector<int> full_label(const PreferenceDomain& d, int agent) {
  std::vector<int> out(d.prefs[static_cast<size_t>(agent)].size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = static_cast<int>(k);
  return out;
}

struct Walker {
  const Mechanism& m;

  // Returns edge taken at node v for the profile, or -1.
  int edge_at(int v, const std::vector<int>& pref_idx) const {
    const auto& node = m.nodes[static_cast<size_t>(v)];
    int q = pref_idx[static_cast<size_t>(node.agent)];
    for (int e : node.out) {
      const auto& lab = m.edges[static_cast<size_t>(e)].label;
      if (std::binary_search(lab.begin(), lab.end(), q)) return e;
    }
    return -1;
  }
};

// Flattened enumeration of the domain with leaf outcomes and per-edge
// traversal lists; shared by the checkers.
struct Tabulation {
  std::vector<std::vector<int>> idx_of;          // flat id -> per-agent pref idx
  std::vector<Allocation> outcome;               // flat id -> leaf allocation
  std::vector<std::vector<int>> through_edge;    // edge -> flat ids

  explicit Tabulation(const Mechanism& m) {
    Walker w{m};
    through_edge.resize(m.edges.size());
    m.domain.for_each_profile(
        [&](const std::vector<int>& idx, const PreferenceProfile&) {
          int flat = static_cast<int>(idx_of.size());
          idx_of.push_back(idx);
          int v = m.root;
          while (!m.is_leaf(v)) {
            int e = w.edge_at(v, idx);
            if (e < 0) throw InvariantError("profile falls out of the tree");
            through_edge[static_cast<size_t>(e)].push_back(flat);
            v = m.edges[static_cast<size_t>(e)].to;
          }
          outcome.push_back(*m.nodes[static_cast<size_t>(v)].alloc);
          return true;
        });
  }
};

std::string describe_pref(const Mechanism& m, int agent, int q) {
  const auto& p = m.domain.prefs[static_cast<size_t>(agent)][static_cast<size_t>(q)];
  std::string s;
  for (Item it : p.order()) {
    if (!s.empty()) s += " ";
    s += m.market.item_token(it);
  }
  return s;
}

}  // namespace

VerificationVerdict validate(const Mechanism& m) {
  VerificationVerdict v;
  v.property = "valid";
  auto fail = [&](const std::string& why, const std::string& node = "") {
    v.holds = false;
    v.witness = why;
    v.witness_node = node;
    return v;
  };

  const int nn = static_cast<int>(m.nodes.size());
  if (m.root < 0 || m.root >= nn) return fail("missing root");
  if (static_cast<int>(m.domain.prefs.size()) != m.market.n())
    return fail("domain does not cover the agents");

  std::vector<int> indegree(static_cast<size_t>(nn), 0);
  std::vector<std::vector<int>> out(static_cast<size_t>(nn));
  for (size_t e = 0; e < m.edges.size(); ++e) {
    const auto& ed = m.edges[e];
    if (ed.from < 0 || ed.from >= nn || ed.to < 0 || ed.to >= nn)
      return fail("edge endpoint out of range");
    ++indegree[static_cast<size_t>(ed.to)];
    out[static_cast<size_t>(ed.from)].push_back(static_cast<int>(e));
  }
  for (int i = 0; i < nn; ++i) {
    const auto& node = m.nodes[static_cast<size_t>(i)];
    if (out[static_cast<size_t>(i)] != node.out)
      return fail("node edge list inconsistent with edges", node.id);
    if (i == m.root) {
      if (indegree[static_cast<size_t>(i)] != 0) return fail("root has a parent", node.id);
    } else if (indegree[static_cast<size_t>(i)] != 1) {
      return fail("node without exactly one parent", node.id);
    }
    if (node.alloc.has_value()) {
      if (!node.out.empty()) return fail("leaf with outgoing edges", node.id);
      if (static_cast<int>(node.alloc->size()) != m.market.n() ||
          !allocation_feasible(*node.alloc, m.market.m()))
        return fail("infeasible leaf allocation", node.id);
    } else {
      if (node.agent < 0 || node.agent >= m.market.n())
        return fail("internal node without a mover", node.id);
      if (node.out.empty()) return fail("internal node without edges", node.id);
    }
  }

  // Reachability plus label continuity along the unique root paths.
  struct Frame {
    int node;
    std::vector<std::optional<std::vector<int>>> inherited;
  };
  std::vector<bool> seen(static_cast<size_t>(nn), false);
  std::vector<Frame> stack;
  stack.push_back({m.root, std::vector<std::optional<std::vector<int>>>(
                               static_cast<size_t>(m.market.n()))});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (seen[static_cast<size_t>(fr.node)]) return fail("node reached twice");
    seen[static_cast<size_t>(fr.node)] = true;
    const auto& node = m.nodes[static_cast<size_t>(fr.node)];
    if (node.alloc.has_value()) continue;

    std::vector<int> expected =
        fr.inherited[static_cast<size_t>(node.agent)].value_or(
            full_label(m.domain, node.agent));
    std::set<int> expected_set(expected.begin(), expected.end());
    std::set<int> covered;
    size_t total = 0;
    for (int e : node.out) {
      const auto& lab = m.edges[static_cast<size_t>(e)].label;
      if (lab.empty()) return fail("empty edge label", node.id);
      total += lab.size();
      for (int q : lab) {
        if (!covered.insert(q).second)
          return fail("sibling labels overlap", node.id);
      }
    }
    if (total != expected_set.size() || covered != expected_set)
      return fail("outgoing labels do not partition the inherited set", node.id);
    for (int e : node.out) {
      Frame child{m.edges[static_cast<size_t>(e)].to, fr.inherited};
      child.inherited[static_cast<size_t>(node.agent)] =
          m.edges[static_cast<size_t>(e)].label;
      stack.push_back(std::move(child));
    }
  }
  for (int i = 0; i < nn; ++i)
    if (!seen[static_cast<size_t>(i)])
      return fail("unreachable node", m.nodes[static_cast<size_t>(i)].id);
  return v;
}

Allocation run_mechanism(const Mechanism& m, const PreferenceProfile& p) {
  std::vector<int> idx(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    int q = m.pref_index(static_cast<int>(i), p[i]);
    if (q < 0) throw ArgumentError("preference outside the mechanism's domain");
    idx[i] = q;
  }
  Walker w{m};
  int v = m.root;
  while (!m.is_leaf(v)) {
    int e = w.edge_at(v, idx);
    if (e < 0) throw ArgumentError("preference outside every edge label");
    v = m.edges[static_cast<size_t>(e)].to;
  }
  return *m.nodes[static_cast<size_t>(v)].alloc;
}

VerificationVerdict implements(const Mechanism& m, const Rule& rule) {
  VerificationVerdict v;
  v.property = "implements";
  Tabulation tab(m);
  size_t flat = 0;
  m.domain.for_each_profile([&](const std::vector<int>&, const PreferenceProfile& p) {
    if (tab.outcome[flat] != rule(p)) {
      v.holds = false;
      v.witness = "mechanism and rule disagree at profile " + std::to_string(flat);
      return false;
    }
    ++flat;
    return true;
  });
  return v;
}

namespace {

// Shared skeleton for the grouped checkers. `strong` widens the truthful
// min to everything reachable via the edge.
VerificationVerdict grouped_check(const Mechanism& m, bool strong) {
  VerificationVerdict v;
  v.property = strong ? "sosp" : "osp";
  Tabulation tab(m);
  for (size_t vi = 0; vi < m.nodes.size(); ++vi) {
    const auto& node = m.nodes[vi];
    if (node.alloc.has_value() || node.out.size() < 2) continue;
    int mover = node.agent;
    const auto& prefs = m.domain.prefs[static_cast<size_t>(mover)];
    for (int e : node.out) {
      // outcomes for the mover via this edge, split by her own preference
      std::map<int, std::vector<Item>> own;
      std::vector<Item> via;
      for (int flat : tab.through_edge[static_cast<size_t>(e)]) {
        Item got = tab.outcome[static_cast<size_t>(flat)][static_cast<size_t>(mover)];
        own[tab.idx_of[static_cast<size_t>(flat)][static_cast<size_t>(mover)]]
            .push_back(got);
        via.push_back(got);
      }
      std::vector<Item> elsewhere;
      for (int e2 : node.out) {
        if (e2 == e) continue;
        for (int flat : tab.through_edge[static_cast<size_t>(e2)])
          elsewhere.push_back(
              tab.outcome[static_cast<size_t>(flat)][static_cast<size_t>(mover)]);
      }
      if (elsewhere.empty()) continue;
      for (int q : m.edges[static_cast<size_t>(e)].label) {
        auto it = own.find(q);
        if (it == own.end()) continue;  // preference pruned upstream
        const auto& pref = prefs[static_cast<size_t>(q)];
        const std::vector<Item>& truthful = strong ? via : it->second;
        int worst = 0;
        for (Item got : truthful) worst = std::max(worst, pref.position(got));
        int best = static_cast<int>(pref.order().size());
        Item best_item = kOutside;
        for (Item got : elsewhere) {
          if (pref.position(got) < best) {
            best = pref.position(got);
            best_item = got;
          }
        }
        if (worst > best) {
          v.holds = false;
          v.witness_node = node.id;
          v.witness = "agent " + m.market.agents[static_cast<size_t>(mover)] +
                      " with preference [" + describe_pref(m, mover, q) +
                      "] can get " + m.market.item_token(best_item) +
                      " elsewhere but risks " +
                      m.market.item_token(pref.order()[static_cast<size_t>(worst)]) +
                      " on her edge";
          return v;
        }
      }
    }
  }
  return v;
}

}  // namespace

VerificationVerdict check_osp(const Mechanism& m) { return grouped_check(m, false); }
VerificationVerdict check_sosp(const Mechanism& m) { return grouped_check(m, true); }

VerificationVerdict check_osp_naive(const Mechanism& m) {
  VerificationVerdict v;
  v.property = "osp";
  Tabulation tab(m);
  for (size_t vi = 0; vi < m.nodes.size() && v.holds; ++vi) {
    const auto& node = m.nodes[vi];
    if (node.alloc.has_value()) continue;
    int mover = node.agent;
    const auto& prefs = m.domain.prefs[static_cast<size_t>(mover)];
    for (int e : node.out) {
      for (int e2 : node.out) {
        if (e2 == e) continue;
        for (int f1 : tab.through_edge[static_cast<size_t>(e)])
          for (int f2 : tab.through_edge[static_cast<size_t>(e2)]) {
            const auto& pref =
                prefs[static_cast<size_t>(tab.idx_of[static_cast<size_t>(f1)]
                                              [static_cast<size_t>(mover)])];
            Item mine = tab.outcome[static_cast<size_t>(f1)][static_cast<size_t>(mover)];
            Item theirs =
                tab.outcome[static_cast<size_t>(f2)][static_cast<size_t>(mover)];
            if (pref.position(mine) > pref.position(theirs)) {
              v.holds = false;
              v.witness_node = node.id;
              v.witness = "divergent pair violates dominance";
              return v;
            }
          }
      }
    }
  }
  return v;
}

VerificationVerdict check_sosp_naive(const Mechanism& m) {
  VerificationVerdict v;
  v.property = "sosp";
  Tabulation tab(m);
  for (size_t vi = 0; vi < m.nodes.size() && v.holds; ++vi) {
    const auto& node = m.nodes[vi];
    if (node.alloc.has_value()) continue;
    int mover = node.agent;
    const auto& prefs = m.domain.prefs[static_cast<size_t>(mover)];
    for (int e : node.out) {
      // truth preferences present at this node on edge e
      std::set<int> present;
      for (int f : tab.through_edge[static_cast<size_t>(e)])
        present.insert(tab.idx_of[static_cast<size_t>(f)][static_cast<size_t>(mover)]);
      for (int q : present) {
        const auto& pref = prefs[static_cast<size_t>(q)];
        for (int f1 : tab.through_edge[static_cast<size_t>(e)]) {
          Item mine = tab.outcome[static_cast<size_t>(f1)][static_cast<size_t>(mover)];
          for (int e2 : node.out) {
            if (e2 == e) continue;
            for (int f2 : tab.through_edge[static_cast<size_t>(e2)]) {
              Item theirs =
                  tab.outcome[static_cast<size_t>(f2)][static_cast<size_t>(mover)];
              if (pref.position(mine) > pref.position(theirs)) {
                v.holds = false;
                v.witness_node = node.id;
                v.witness = "triple violates strong dominance";
                return v;
              }
            }
          }
        }
      }
    }
  }
  return v;
}

VerificationVerdict check_simple(const Mechanism& m) {
  VerificationVerdict v;
  v.property = "simple";
  struct Frame {
    int node;
    std::uint64_t seen;
  };
  std::vector<Frame> stack{{m.root, 0}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    const auto& node = m.nodes[static_cast<size_t>(fr.node)];
    if (node.alloc.has_value()) continue;
    if (fr.seen & (1ull << node.agent)) {
      v.holds = false;
      v.witness_node = node.id;
      v.witness = "agent " + m.market.agents[static_cast<size_t>(node.agent)] +
                  " moves twice on a path";
      return v;
    }
    std::uint64_t seen = fr.seen | (1ull << node.agent);
    for (int e : node.out)
      stack.push_back({m.edges[static_cast<size_t>(e)].to, seen});
  }
  return v;
}

}  // namespace assign
