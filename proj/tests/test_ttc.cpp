#include <random>

#include "doctest.h"

#include "assign/io.hpp"
#include "assign/ttc.hpp"
#include "helpers.hpp"

using namespace assign;

namespace {

// Independent two-agent oracle. With two agents a cycle is either a self-loop
// or a swap, so each step resolves by direct case analysis on the two tops.
Allocation two_agent_oracle(const Market& mk, const PriorityStructure& s,
                            const PreferenceProfile& p) {
  REQUIRE(mk.n() == 2);
  std::vector<bool> object_left(static_cast<size_t>(mk.m()) + 1, true);
  Allocation out(2, -1);
  auto top_remaining = [&](int agent) {
    for (Item it : p[static_cast<size_t>(agent)].order())
      if (it == kOutside || object_left[static_cast<size_t>(it)]) return it;
    return kOutside;
  };
  auto owner = [&](Item it) {
    int first = s.of(it).top();
    if (out[static_cast<size_t>(first)] == -1) return first;
    return 1 - first;
  };
  while (out[0] == -1 || out[1] == -1) {
    bool any_object = false;
    for (Item it = 1; it <= mk.m(); ++it) any_object |= object_left[static_cast<size_t>(it)];
    if (!any_object) {
      if (out[0] == -1) out[0] = kOutside;
      if (out[1] == -1) out[1] = kOutside;
      break;
    }
    if (out[0] == -1 && out[1] == -1) {
      Item t0 = top_remaining(0), t1 = top_remaining(1);
      bool self0 = t0 == kOutside || owner(t0) == 0;
      bool self1 = t1 == kOutside || owner(t1) == 1;
      if (self0 && self1) {
        out[0] = t0;
        out[1] = t1;
      } else if (self0) {
        out[0] = t0;  // agent 1 points at 0; only the self-loop executes
        if (t0 != kOutside) object_left[static_cast<size_t>(t0)] = false;
      } else if (self1) {
        out[1] = t1;
        if (t1 != kOutside) object_left[static_cast<size_t>(t1)] = false;
      } else {
        out[0] = t0;  // both point across: one swap cycle
        out[1] = t1;
      }
    } else {
      int i = out[0] == -1 ? 0 : 1;
      out[static_cast<size_t>(i)] = top_remaining(i);  // sole agent owns all
    }
  }
  return out;
}

}  // namespace

TEST_CASE("worked replay") {
  auto [mk, s] = helpers::load_market("table1/market.json");
  auto p = profile_from_json(mk, load_json_file(helpers::fx("table1/profile.json")));
  FpttcTrace t = run_fpttc(mk, s, p);

  CHECK(t.steps.size() == 3);
  CHECK(allocation_to_json(mk, t.allocation) ==
        load_json_file(helpers::fx("table1/expected.json")).at("allocation"));

  const StepRecord& s1 = t.steps[0];
  CHECK(s1.remaining_agents == std::vector<int>{0, 1, 2, 3});
  CHECK(s1.ownership[0] == std::vector<Item>{1});
  CHECK(s1.ownership[3] == std::vector<Item>{4});
  CHECK(s1.pointer == std::vector<int>{0, 0, 0, 2});
  CHECK(s1.cycles == std::vector<std::vector<int>>{{0}});
  CHECK(s1.assignments == std::vector<std::pair<int, Item>>{{0, kOutside}});

  const StepRecord& s2 = t.steps[1];
  CHECK(s2.remaining_agents == std::vector<int>{1, 2, 3});
  CHECK(s2.remaining_objects == std::vector<Item>{1, 2, 3, 4});
  CHECK(s2.ownership[3] == std::vector<Item>{1, 4});
  CHECK(s2.ownership[1] == std::vector<Item>{2});
  CHECK(s2.ownership[2] == std::vector<Item>{3});
  CHECK(s2.cycles == std::vector<std::vector<int>>{{2, 3}});
  CHECK(s2.assignments == std::vector<std::pair<int, Item>>{{2, 1}, {3, 3}});

  const StepRecord& s3 = t.steps[2];
  CHECK(s3.remaining_agents == std::vector<int>{1});
  CHECK(s3.assignments == std::vector<std::pair<int, Item>>{{1, kOutside}});
}

TEST_CASE("two-agent oracle agreement") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3);
    Market mk = helpers::toy_market(2, m);
    PriorityStructure s;
    for (Item a = 1; a <= m; ++a) {
      std::vector<int> ord{0, 1};
      if (rng() % 2) std::swap(ord[0], ord[1]);
      s.orders.push_back(PriorityOrder::from_order(ord, 2));
    }
    PreferenceDomain d = make_full_domain(mk, true);
    d.for_each_profile([&](const std::vector<int>&, const PreferenceProfile& p) {
      CHECK(fpttc_allocation(mk, s, p) == two_agent_oracle(mk, s, p));
      return true;
    });
  }
}

TEST_CASE("fixture outcome rows") {
  for (const char* dir : {"tableE", "tableG1"}) {
    auto [mk, s] = helpers::load_market(std::string(dir) + "/market.json");
    Json rows = load_json_file(helpers::fx(std::string(dir) + "/outcomes.json"));
    REQUIRE(rows.at("rule") == "fpttc");
    for (const auto& row : rows.at("rows")) {
      auto p = profile_from_json(mk, row.at("profile"));
      CHECK(allocation_to_json(mk, fpttc_allocation(mk, s, p)) == row.at("allocation"));
    }
  }
}

TEST_CASE("feasibility, rationality, shrinkage") {
  std::mt19937 rng(987123);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = 2 + static_cast<int>(rng() % 3);
    Market mk = helpers::toy_market(n, m);
    PriorityStructure s;
    std::vector<int> ord(static_cast<size_t>(n));
    for (Item a = 1; a <= m; ++a) {
      for (int i = 0; i < n; ++i) ord[static_cast<size_t>(i)] = i;
      std::shuffle(ord.begin(), ord.end(), rng);
      s.orders.push_back(PriorityOrder::from_order(ord, n));
    }
    auto prefs = all_preferences(mk, true);
    PreferenceProfile p;
    for (int i = 0; i < n; ++i) p.push_back(prefs[rng() % prefs.size()]);

    FpttcTrace t = run_fpttc(mk, s, p);
    CHECK(allocation_feasible(t.allocation, m));
    for (int i = 0; i < n; ++i) {
      Item got = t.allocation[static_cast<size_t>(i)];
      CHECK((got == kOutside ||
             p[static_cast<size_t>(i)].prefers(got, kOutside)));
    }
    for (size_t k = 1; k < t.steps.size(); ++k) {
      const auto& prev = t.steps[k - 1];
      const auto& cur = t.steps[k];
      CHECK(cur.remaining_agents.size() < prev.remaining_agents.size());
      CHECK(cur.remaining_objects.size() <= prev.remaining_objects.size());
      for (int i : cur.remaining_agents)
        CHECK(std::find(prev.remaining_agents.begin(), prev.remaining_agents.end(),
                        i) != prev.remaining_agents.end());
      for (Item a : cur.remaining_objects)
        CHECK(std::find(prev.remaining_objects.begin(),
                        prev.remaining_objects.end(), a) !=
              prev.remaining_objects.end());
    }
  }
}

TEST_CASE("explicit endowment round") {
  Market mk = helpers::toy_market(3, 3);
  PreferenceProfile p;
  p.push_back(Preference::from_order({2, 1, 3, 0}, 3));
  p.push_back(Preference::from_order({2, 1, 3, 0}, 3));
  p.push_back(Preference::from_order({0, 1, 2, 3}, 3));
  // agent 0 owns o2, agent 1 owns o1: swap cycle; agent 2 exits alone
  TtcRoundResult r = ttc_round(mk, {{0, {2}}, {1, {1}}}, p, {2});
  CHECK(r.pointer == std::vector<int>{0, 0, 2});
  CHECK(r.cycles == std::vector<std::vector<int>>{{0}, {2}});
  CHECK(r.assignments == std::vector<std::pair<int, Item>>{{0, 2}, {2, kOutside}});
}

TEST_CASE("rule tabulation matches enumeration") {
  auto [mk, s] = helpers::load_market("tableG1/market.json");
  PreferenceDomain d = make_full_domain(mk, true);
  auto rows = run_rule(mk, s, d);
  CHECK(rows.size() == d.profile_count());
  size_t at = 0;
  d.for_each_profile([&](const std::vector<int>&, const PreferenceProfile& p) {
    CHECK(rows[at].first == p);
    CHECK(rows[at].second == fpttc_allocation(mk, s, p));
    ++at;
    return true;
  });
}
