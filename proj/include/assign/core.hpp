#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace assign {

// Items: 0 is the outside option, 1..m are objects (item i corresponds to
// objects[i-1] of the market).
using Item = int;
inline constexpr Item kOutside = 0;
inline constexpr const char* kOutsideToken = "@0";

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

struct Market {
  std::vector<std::string> agents;   // declaration order
  std::vector<std::string> objects;  // declaration order

  int n() const { return static_cast<int>(agents.size()); }
  int m() const { return static_cast<int>(objects.size()); }

  // Throws ArgumentError on duplicate ids, agent/object token clashes,
  // empty sides, or an object named like the outside option.
  void check() const;

  int agent_index(const std::string& name) const;  // -1 if unknown
  Item object_item(const std::string& name) const;  // -1 if unknown
  Item item_from_token(const std::string& tok) const;  // throws if unknown
  std::string item_token(Item it) const;
};

// Strict ranking over all items of a market (every object plus the outside
// option, each exactly once), best first.
class Preference {
 public:
  Preference() = default;
  static Preference from_order(std::vector<Item> order, int num_objects);

  const std::vector<Item>& order() const { return order_; }
  int position(Item it) const { return pos_[static_cast<size_t>(it)]; }
  bool prefers(Item a, Item b) const { return position(a) < position(b); }
  Item top() const { return order_.front(); }
  bool acceptable(Item a) const { return a != kOutside && prefers(a, kOutside); }
  int num_items() const { return static_cast<int>(order_.size()); }

  bool operator==(const Preference& o) const { return order_ == o.order_; }

 private:
  std::vector<Item> order_;
  std::vector<int> pos_;
};

// tau(P, A'): most preferred member of a nonempty subset.
Item top_pref(const Preference& p, const std::vector<Item>& subset);

// Strict ranking over all agents of a market, best first.
class PriorityOrder {
 public:
  PriorityOrder() = default;
  static PriorityOrder from_order(std::vector<int> order, int num_agents);

  const std::vector<int>& order() const { return order_; }
  int position(int agent) const { return pos_[static_cast<size_t>(agent)]; }
  bool prefers(int a, int b) const { return position(a) < position(b); }
  int top() const { return order_.front(); }
  int num_agents() const { return static_cast<int>(order_.size()); }

  bool operator==(const PriorityOrder& o) const { return order_ == o.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> pos_;
};

int top_agent(const PriorityOrder& o, const std::vector<int>& subset);
std::vector<int> upper_contour(const PriorityOrder& o, int agent);
int priority_rank(const PriorityOrder& o, int agent);  // 1-based

struct PriorityStructure {
  std::vector<PriorityOrder> orders;  // indexed by object item - 1

  const PriorityOrder& of(Item object) const {
    return orders[static_cast<size_t>(object - 1)];
  }
};

// Relative order of `agents` under `o`, best first (agents keep original ids).
std::vector<int> reduced_order(const PriorityOrder& o, const std::vector<int>& agents);

// Reduced structure over (agents, objects); returned orders are parallel to
// `objects` and list surviving agents by original id.
std::vector<std::vector<int>> reduced_structure(const PriorityStructure& s,
                                                const std::vector<int>& agents,
                                                const std::vector<Item>& objects);

// T(reduced structure): agents topping at least one object, sorted ascending.
std::vector<int> top_owner_set(const PriorityStructure& s,
                               const std::vector<int>& agents,
                               const std::vector<Item>& objects);

using PreferenceProfile = std::vector<Preference>;
using Allocation = std::vector<Item>;  // per agent

bool allocation_feasible(const Allocation& a, int num_objects);

struct PreferenceDomain {
  enum class Kind { NoOutside, WithOutside, Explicit };
  Kind kind = Kind::Explicit;
  std::vector<std::vector<Preference>> prefs;  // per agent, canonical order

  std::uint64_t profile_count() const;
  PreferenceProfile profile(const std::vector<int>& idx) const;

  // Deterministic enumeration: agent 0 most significant, per-agent preference
  // index ascending. Callback returns false to stop early.
  template <class Fn>
  void for_each_profile(Fn&& fn) const {
    std::vector<int> idx(prefs.size(), 0);
    PreferenceProfile prof;
    prof.reserve(prefs.size());
    for (const auto& ps : prefs) prof.push_back(ps.front());
    for (;;) {
      if (!fn(static_cast<const std::vector<int>&>(idx),
              static_cast<const PreferenceProfile&>(prof)))
        return;
      int k = static_cast<int>(idx.size()) - 1;
      while (k >= 0) {
        if (++idx[static_cast<size_t>(k)] <
            static_cast<int>(prefs[static_cast<size_t>(k)].size())) {
          prof[static_cast<size_t>(k)] =
              prefs[static_cast<size_t>(k)][static_cast<size_t>(idx[static_cast<size_t>(k)])];
          break;
        }
        idx[static_cast<size_t>(k)] = 0;
        prof[static_cast<size_t>(k)] = prefs[static_cast<size_t>(k)].front();
        --k;
      }
      if (k < 0) return;
    }
  }
};

// All strict rankings of the market's items; with_outside=false forces the
// outside option last. Canonically sorted.
std::vector<Preference> all_preferences(const Market& mk, bool with_outside);

// Canonical order: lexicographic by item token sequence.
void sort_preferences(const Market& mk, std::vector<Preference>& ps);

PreferenceDomain make_full_domain(const Market& mk, bool with_outside);
PreferenceDomain make_explicit_domain(const Market& mk,
                                      std::vector<std::vector<Preference>> per_agent);

}  // namespace assign
