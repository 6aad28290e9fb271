#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assign/audit.hpp"
#include "assign/core.hpp"

namespace assign {

struct MechNode {
  std::string id;
  int agent = -1;                   // mover; -1 for leaves
  std::optional<Allocation> alloc;  // leaves only
  std::vector<int> out;             // outgoing edge indices, declaration order
};

struct MechEdge {
  int from = -1;
  int to = -1;
  std::vector<int> label;  // sorted preference indices into domain.prefs[mover]
  std::string raw_label;   // original JSON text, kept for round-tripping
};

struct Mechanism {
  Market market;
  PreferenceDomain domain;
  std::vector<MechNode> nodes;
  std::vector<MechEdge> edges;
  int root = -1;

  int node_index(const std::string& id) const;
  bool is_leaf(int v) const { return nodes[static_cast<size_t>(v)].alloc.has_value(); }
  int pref_index(int agent, const Preference& p) const;  // -1 if not in domain
};

struct VerificationVerdict {
  std::string property;  // valid | osp | sosp | simple | implements
  bool holds = true;
  std::string witness;  // human-readable; empty when holds
  std::string witness_node;
};

VerificationVerdict validate(const Mechanism& m);

Allocation run_mechanism(const Mechanism& m, const PreferenceProfile& p);

VerificationVerdict implements(const Mechanism& m, const Rule& rule);

// Grouped checkers (per edge, min/max over reachable outcomes) with naive
// pair/triple-loop oracles.
VerificationVerdict check_osp(const Mechanism& m);
VerificationVerdict check_osp_naive(const Mechanism& m);
VerificationVerdict check_sosp(const Mechanism& m);
VerificationVerdict check_sosp_naive(const Mechanism& m);
VerificationVerdict check_simple(const Mechanism& m);

}  // namespace assign
