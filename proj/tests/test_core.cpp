#include "doctest.h"

#include "assign/core.hpp"
#include "helpers.hpp"

using namespace assign;

TEST_CASE("market validation") {
  Market mk = helpers::toy_market(3, 3);
  CHECK(mk.n() == 3);
  CHECK(mk.m() == 3);
  CHECK(mk.agent_index("2") == 1);
  CHECK(mk.object_item("o3") == 3);
  CHECK(mk.item_from_token("@0") == kOutside);
  CHECK(mk.item_from_token("o1") == 1);
  CHECK(mk.item_token(0) == "@0");
  CHECK(mk.item_token(2) == "o2");

  Market dup;
  dup.agents = {"x", "x"};
  dup.objects = {"o"};
  CHECK_THROWS_AS(dup.check(), ArgumentError);

  Market bad;
  bad.agents = {"x"};
  bad.objects = {"@0"};
  CHECK_THROWS_AS(bad.check(), ArgumentError);

  Market empty;
  empty.objects = {"o"};
  CHECK_THROWS_AS(empty.check(), ArgumentError);
}

TEST_CASE("preference basics") {
  Preference p = Preference::from_order({2, 1, 0, 3}, 3);
  CHECK(p.top() == 2);
  CHECK(p.prefers(2, 1));
  CHECK(p.prefers(1, 3));
  CHECK(p.acceptable(2));
  CHECK(p.acceptable(1));
  CHECK(!p.acceptable(3));
  CHECK(!p.acceptable(kOutside));
  CHECK(p.position(kOutside) == 2);
  CHECK(top_pref(p, {3, 1}) == 1);
  CHECK(top_pref(p, {3}) == 3);

  CHECK_THROWS_AS(Preference::from_order({1, 1, 0}, 2), ArgumentError);
  CHECK_THROWS_AS(Preference::from_order({1, 2}, 2), ArgumentError);
}

TEST_CASE("priority order basics") {
  PriorityOrder o = PriorityOrder::from_order({2, 0, 1}, 3);
  CHECK(o.top() == 2);
  CHECK(o.prefers(2, 0));
  CHECK(top_agent(o, {0, 1}) == 0);
  CHECK(priority_rank(o, 2) == 1);
  CHECK(priority_rank(o, 1) == 3);
  CHECK(upper_contour(o, 0) == std::vector<int>{2});
  CHECK(upper_contour(o, 2).empty());
  CHECK(reduced_order(o, {1, 0}) == std::vector<int>{0, 1});
}

TEST_CASE("top owner set") {
  Market mk = helpers::toy_market(3, 3);
  PriorityStructure s;
  s.orders.push_back(PriorityOrder::from_order({0, 1, 2}, 3));
  s.orders.push_back(PriorityOrder::from_order({1, 0, 2}, 3));
  s.orders.push_back(PriorityOrder::from_order({2, 1, 0}, 3));
  CHECK(top_owner_set(s, {0, 1, 2}, {1, 2, 3}) == std::vector<int>{0, 1, 2});
  CHECK(top_owner_set(s, {0, 1, 2}, {1, 2}) == std::vector<int>{0, 1});
  CHECK(top_owner_set(s, {1, 2}, {1, 2, 3}) == std::vector<int>{1, 2});
  CHECK(top_owner_set(s, {0}, {1, 2, 3}) == std::vector<int>{0});
}

TEST_CASE("full domains") {
  Market mk = helpers::toy_market(2, 3);
  auto no_out = all_preferences(mk, false);
  CHECK(no_out.size() == 6);
  for (const auto& p : no_out) CHECK(p.order().back() == kOutside);
  auto with_out = all_preferences(mk, true);
  CHECK(with_out.size() == 24);

  // canonical order is lexicographic by item token sequence; "@0" < "o1"
  CHECK(with_out.front().order().front() == kOutside);
  for (size_t i = 1; i < with_out.size(); ++i) {
    auto toks = [&](const Preference& p) {
      std::vector<std::string> ts;
      for (Item it : p.order()) ts.push_back(mk.item_token(it));
      return ts;
    };
    CHECK(toks(with_out[i - 1]) < toks(with_out[i]));
  }

  PreferenceDomain d = make_full_domain(mk, false);
  CHECK(d.kind == PreferenceDomain::Kind::NoOutside);
  CHECK(d.profile_count() == 36);
  PreferenceDomain dw = make_full_domain(mk, true);
  CHECK(dw.profile_count() == 576);
}

TEST_CASE("profile enumeration order") {
  Market mk = helpers::toy_market(2, 2);
  PreferenceDomain d = make_full_domain(mk, false);
  CHECK(d.profile_count() == 4);
  std::vector<std::vector<int>> seen;
  d.for_each_profile([&](const std::vector<int>& idx, const PreferenceProfile& p) {
    seen.push_back(idx);
    CHECK(p[0] == d.prefs[0][static_cast<size_t>(idx[0])]);
    CHECK(p[1] == d.prefs[1][static_cast<size_t>(idx[1])]);
    return true;
  });
  // agent 0 most significant
  std::vector<std::vector<int>> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(seen == want);
  CHECK(d.profile({1, 0})[0] == d.prefs[0][1]);

  int calls = 0;
  d.for_each_profile([&](const std::vector<int>&, const PreferenceProfile&) {
    return ++calls < 2;
  });
  CHECK(calls == 2);
}

TEST_CASE("explicit domain deduplicates and sorts") {
  Market mk = helpers::toy_market(2, 2);
  Preference a = Preference::from_order({2, 1, 0}, 2);
  Preference b = Preference::from_order({1, 2, 0}, 2);
  PreferenceDomain d = make_explicit_domain(mk, {{a, b, a}, {b}});
  CHECK(d.prefs[0].size() == 2);
  CHECK(d.prefs[0][0] == b);  // o1 before o2 lexicographically
  CHECK(d.prefs[0][1] == a);
  CHECK(d.profile_count() == 2);
}

TEST_CASE("allocation feasibility") {
  CHECK(allocation_feasible({1, 2, 0}, 3));
  CHECK(allocation_feasible({0, 0, 0}, 3));
  CHECK(!allocation_feasible({1, 1}, 3));
  CHECK(!allocation_feasible({4, 0}, 3));
}
