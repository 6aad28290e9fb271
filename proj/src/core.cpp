#include "assign/core.hpp"

#include <set>

namespace assign {

void Market::check() const {
  if (agents.empty()) throw ArgumentError("market has no agents");
  if (objects.empty()) throw ArgumentError("market has no objects");
  std::set<std::string> seen;
  for (const auto& a : agents)
    if (!seen.insert(a).second) throw ArgumentError("duplicate agent id: " + a);
  for (const auto& o : objects) {
    if (o == kOutsideToken)
      throw ArgumentError("object may not use the outside-option token");
    if (!seen.insert(o).second)
      throw ArgumentError("duplicate or agent-clashing object id: " + o);
  }
}

int Market::agent_index(const std::string& name) const {
  for (int i = 0; i < n(); ++i)
    if (agents[static_cast<size_t>(i)] == name) return i;
  return -1;
}

Item Market::object_item(const std::string& name) const {
  for (int i = 0; i < m(); ++i)
    if (objects[static_cast<size_t>(i)] == name) return i + 1;
  return -1;
}

Item Market::item_from_token(const std::string& tok) const {
  if (tok == kOutsideToken) return kOutside;
  Item it = object_item(tok);
  if (it < 0) throw ArgumentError("unknown item token: " + tok);
  return it;
}

std::string Market::item_token(Item it) const {
  if (it == kOutside) return kOutsideToken;
  if (it < 1 || it > m()) throw ArgumentError("item out of range");
  return objects[static_cast<size_t>(it - 1)];
}

Preference Preference::from_order(std::vector<Item> order, int num_objects) {
  if (static_cast<int>(order.size()) != num_objects + 1)
    throw ArgumentError("preference must rank every object plus the outside option");
  Preference p;
  p.pos_.assign(order.size(), -1);
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    Item it = order[static_cast<size_t>(i)];
    if (it < 0 || it > num_objects)
      throw ArgumentError("preference ranks an unknown item");
    if (p.pos_[static_cast<size_t>(it)] != -1)
      throw ArgumentError("preference ranks an item twice");
    p.pos_[static_cast<size_t>(it)] = i;
  }
  p.order_ = std::move(order);
  return p;
}

Item top_pref(const Preference& p, const std::vector<Item>& subset) {
  if (subset.empty()) throw ArgumentError("top_pref over an empty subset");
  Item best = subset.front();
  for (Item it : subset)
    if (p.prefers(it, best)) best = it;
  return best;
}

PriorityOrder PriorityOrder::from_order(std::vector<int> order, int num_agents) {
  if (static_cast<int>(order.size()) != num_agents)
    throw ArgumentError("priority order must rank every agent");
  PriorityOrder o;
  o.pos_.assign(order.size(), -1);
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    int a = order[static_cast<size_t>(i)];
    if (a < 0 || a >= num_agents) throw ArgumentError("priority ranks an unknown agent");
    if (o.pos_[static_cast<size_t>(a)] != -1)
      throw ArgumentError("priority ranks an agent twice");
    o.pos_[static_cast<size_t>(a)] = i;
  }
  o.order_ = std::move(order);
  return o;
}

int top_agent(const PriorityOrder& o, const std::vector<int>& subset) {
  if (subset.empty()) throw ArgumentError("top_agent over an empty subset");
  int best = subset.front();
  for (int a : subset)
    if (o.prefers(a, best)) best = a;
  return best;
}

std::vector<int> upper_contour(const PriorityOrder& o, int agent) {
  if (agent < 0 || agent >= o.num_agents()) throw ArgumentError("unknown agent");
  std::vector<int> out;
  for (int a : o.order()) {
    if (a == agent) break;
    out.push_back(a);
  }
  return out;
}

int priority_rank(const PriorityOrder& o, int agent) {
  if (agent < 0 || agent >= o.num_agents()) throw ArgumentError("unknown agent");
  return o.position(agent) + 1;
}

std::vector<int> reduced_order(const PriorityOrder& o, const std::vector<int>& agents) {
  std::vector<bool> keep(static_cast<size_t>(o.num_agents()), false);
  for (int a : agents) keep[static_cast<size_t>(a)] = true;
  std::vector<int> out;
  for (int a : o.order())
    if (keep[static_cast<size_t>(a)]) out.push_back(a);
  return out;
}

std::vector<std::vector<int>> reduced_structure(const PriorityStructure& s,
                                                const std::vector<int>& agents,
                                                const std::vector<Item>& objects) {
  if (agents.empty() || objects.empty())
    throw ArgumentError("reduced structure needs nonempty sides");
  std::vector<std::vector<int>> out;
  out.reserve(objects.size());
  for (Item a : objects) out.push_back(reduced_order(s.of(a), agents));
  return out;
}

std::vector<int> top_owner_set(const PriorityStructure& s,
                               const std::vector<int>& agents,
                               const std::vector<Item>& objects) {
  if (agents.empty() || objects.empty())
    throw ArgumentError("top_owner_set needs nonempty sides");
  std::set<int> owners;
  for (Item a : objects) owners.insert(top_agent(s.of(a), agents));
  return std::vector<int>(owners.begin(), owners.end());
}

bool allocation_feasible(const Allocation& a, int num_objects) {
  std::vector<bool> used(static_cast<size_t>(num_objects) + 1, false);
  for (Item it : a) {
    if (it < 0 || it > num_objects) return false;
    if (it == kOutside) continue;
    if (used[static_cast<size_t>(it)]) return false;
    used[static_cast<size_t>(it)] = true;
  }
  return true;
}

std::uint64_t PreferenceDomain::profile_count() const {
  std::uint64_t c = 1;
  for (const auto& ps : prefs) c *= ps.size();
  return c;
}

PreferenceProfile PreferenceDomain::profile(const std::vector<int>& idx) const {
  if (idx.size() != prefs.size()) throw ArgumentError("profile index arity mismatch");
  PreferenceProfile p;
  p.reserve(idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    p.push_back(prefs[i].at(static_cast<size_t>(idx[i])));
  return p;
}

std::vector<Preference> all_preferences(const Market& mk, bool with_outside) {
  std::vector<Item> items;
  for (Item it = 1; it <= mk.m(); ++it) items.push_back(it);
  std::sort(items.begin(), items.end());
  std::vector<Preference> out;
  do {
    std::vector<Item> order = items;
    if (with_outside) {
      // insert the outside option in every slot
      for (size_t k = 0; k <= order.size(); ++k) {
        std::vector<Item> full = order;
        full.insert(full.begin() + static_cast<long>(k), kOutside);
        out.push_back(Preference::from_order(full, mk.m()));
      }
    } else {
      order.push_back(kOutside);
      out.push_back(Preference::from_order(order, mk.m()));
    }
  } while (std::next_permutation(items.begin(), items.end()));
  sort_preferences(mk, out);
  return out;
}

void sort_preferences(const Market& mk, std::vector<Preference>& ps) {
  auto key = [&mk](const Preference& p) {
    std::vector<std::string> toks;
    toks.reserve(p.order().size());
    for (Item it : p.order()) toks.push_back(mk.item_token(it));
    return toks;
  };
  std::sort(ps.begin(), ps.end(),
            [&](const Preference& a, const Preference& b) { return key(a) < key(b); });
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
}

PreferenceDomain make_full_domain(const Market& mk, bool with_outside) {
  PreferenceDomain d;
  d.kind = with_outside ? PreferenceDomain::Kind::WithOutside
                        : PreferenceDomain::Kind::NoOutside;
  auto ps = all_preferences(mk, with_outside);
  d.prefs.assign(static_cast<size_t>(mk.n()), ps);
  return d;
}

PreferenceDomain make_explicit_domain(const Market& mk,
                                      std::vector<std::vector<Preference>> per_agent) {
  if (static_cast<int>(per_agent.size()) != mk.n())
    throw ArgumentError("explicit domain must cover every agent");
  PreferenceDomain d;
  d.kind = PreferenceDomain::Kind::Explicit;
  for (auto& ps : per_agent) {
    if (ps.empty()) throw ArgumentError("empty admissible set");
    sort_preferences(mk, ps);
  }
  d.prefs = std::move(per_agent);
  return d;
}

}  // namespace assign
