#include <random>

#include "doctest.h"

#include "assign/apda.hpp"
#include "assign/io.hpp"
#include "helpers.hpp"

using namespace assign;

namespace {

// Independent one-proposal-at-a-time deferred acceptance. Agent-proposing DA
// reaches the same matching regardless of proposal order, so this sequential
// variant serves as an oracle for the simultaneous-round implementation.
Allocation sequential_da(const Market& mk, const PriorityStructure& s,
                         const PreferenceProfile& p) {
  int n = mk.n();
  std::vector<size_t> next(static_cast<size_t>(n), 0);
  std::vector<int> holder(static_cast<size_t>(mk.m()) + 1, -1);
  Allocation out(static_cast<size_t>(n), -2);
  std::vector<int> free;
  for (int i = n - 1; i >= 0; --i) free.push_back(i);
  while (!free.empty()) {
    int i = free.back();
    free.pop_back();
    Item want = p[static_cast<size_t>(i)].order()[next[static_cast<size_t>(i)]++];
    if (want == kOutside) {
      out[static_cast<size_t>(i)] = kOutside;
      continue;
    }
    int cur = holder[static_cast<size_t>(want)];
    if (cur == -1) {
      holder[static_cast<size_t>(want)] = i;
    } else if (s.of(want).prefers(i, cur)) {
      holder[static_cast<size_t>(want)] = i;
      free.push_back(cur);
    } else {
      free.push_back(i);
    }
  }
  for (Item a = 1; a <= mk.m(); ++a)
    if (holder[static_cast<size_t>(a)] != -1)
      out[static_cast<size_t>(holder[static_cast<size_t>(a)])] = a;
  for (auto& x : out) REQUIRE(x != -2);
  return out;
}

bool stable(const Market& mk, const PriorityStructure& s,
            const PreferenceProfile& p, const Allocation& a) {
  if (!allocation_feasible(a, mk.m())) return false;
  std::vector<int> assignee(static_cast<size_t>(mk.m()) + 1, -1);
  for (int i = 0; i < mk.n(); ++i) {
    Item got = a[static_cast<size_t>(i)];
    if (got != kOutside) {
      if (!p[static_cast<size_t>(i)].acceptable(got)) return false;  // IR
      assignee[static_cast<size_t>(got)] = i;
    }
  }
  for (int i = 0; i < mk.n(); ++i)
    for (Item b = 1; b <= mk.m(); ++b) {
      if (!p[static_cast<size_t>(i)].prefers(b, a[static_cast<size_t>(i)])) continue;
      int j = assignee[static_cast<size_t>(b)];
      if (j == -1 || s.of(b).prefers(i, j)) return false;  // blocking pair
    }
  return true;
}

}  // namespace

TEST_CASE("deferred acceptance fixture rows") {
  for (const char* dir : {"tableD1", "tableD2"}) {
    auto [mk, s] = helpers::load_market(std::string(dir) + "/market.json");
    Json rows = load_json_file(helpers::fx(std::string(dir) + "/outcomes.json"));
    REQUIRE(rows.at("rule") == "apda");
    for (const auto& row : rows.at("rows")) {
      auto p = profile_from_json(mk, row.at("profile"));
      CHECK(allocation_to_json(mk, apda_allocation(mk, s, p)) == row.at("allocation"));
    }
  }
}

TEST_CASE("stability and oracle agreement") {
  std::mt19937 rng(55511);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % 4);
    Market mk = helpers::toy_market(n, m);
    PriorityStructure s;
    std::vector<int> ord(static_cast<size_t>(n));
    for (Item a = 1; a <= m; ++a) {
      for (int i = 0; i < n; ++i) ord[static_cast<size_t>(i)] = i;
      std::shuffle(ord.begin(), ord.end(), rng);
      s.orders.push_back(PriorityOrder::from_order(ord, n));
    }
    auto prefs = all_preferences(mk, true);
    for (int rep = 0; rep < 20; ++rep) {
      PreferenceProfile p;
      for (int i = 0; i < n; ++i) p.push_back(prefs[rng() % prefs.size()]);
      ApdaResult r = run_apda(mk, s, p);
      CHECK(stable(mk, s, p, r.allocation));
      CHECK(r.allocation == sequential_da(mk, s, p));
      CHECK(static_cast<int>(r.rounds.size()) <= n * (m + 1));
    }
  }
}

TEST_CASE("round records are consistent") {
  auto [mk, s] = helpers::load_market("tableD1/market.json");
  Json rows = load_json_file(helpers::fx("tableD1/outcomes.json"));
  auto p = profile_from_json(mk, rows.at("rows")[0].at("profile"));
  ApdaResult r = run_apda(mk, s, p);
  REQUIRE(!r.rounds.empty());
  CHECK(r.rounds.front().round == 1);
  // round 1: everyone applies to her top
  CHECK(r.rounds.front().applications.size() == 3);
  for (const auto& [i, it] : r.rounds.front().applications)
    CHECK(it == p[static_cast<size_t>(i)].top());
  // a rejected agent reapplies in the next round
  for (size_t k = 0; k + 1 < r.rounds.size(); ++k)
    for (int i : r.rounds[k].rejected) {
      bool applied = false;
      for (const auto& [j, it] : r.rounds[k + 1].applications) applied |= j == i;
      CHECK(applied);
    }
}

TEST_CASE("equivalence audit over domains") {
  // identical priorities: deferred acceptance coincides with trading cycles
  auto [mk, s] = helpers::load_market("sd3/market.json");
  RuleEqualityResult eq = apda_equals_fpttc(mk, s, make_full_domain(mk, true));
  CHECK(eq.equal);
  CHECK(eq.profiles_checked == 13824);

  // an Ergin cycle separates the two rules on the unrestricted domain
  auto [mk5, s5] = helpers::load_market("example5/market.json");
  RuleEqualityResult neq = apda_equals_fpttc(mk5, s5, make_full_domain(mk5, true));
  CHECK(!neq.equal);
  REQUIRE(neq.witness_idx.has_value());
  auto d5 = make_full_domain(mk5, true);
  auto wp = d5.profile(*neq.witness_idx);
  CHECK(apda_allocation(mk5, s5, wp) != fpttc_allocation(mk5, s5, wp));
}
