#include <random>

#include "doctest.h"

#include "assign/apda.hpp"
#include "assign/io.hpp"
#include "assign/search.hpp"
#include "assign/ttc.hpp"
#include "helpers.hpp"

using namespace assign;

namespace {

Rule fpttc_rule(const Market& mk, const PriorityStructure& s) {
  return [&mk, &s](const PreferenceProfile& p) { return fpttc_allocation(mk, s, p); };
}

// Random rule over a finite domain, tabulated on feasible allocations.
Rule random_rule(const Market& mk, const PreferenceDomain& d, std::mt19937& rng,
                 std::vector<Allocation>* table_out) {
  std::vector<Allocation> allocs;
  std::vector<Allocation> feasible;
  std::vector<Item> cur(static_cast<size_t>(mk.n()), 0);
  // enumerate all feasible allocations of the market
  std::function<void(size_t)> gen = [&](size_t i) {
    if (i == cur.size()) {
      feasible.push_back(cur);
      return;
    }
    for (Item it = 0; it <= mk.m(); ++it) {
      bool used = false;
      for (size_t k = 0; k < i; ++k) used |= it != kOutside && cur[k] == it;
      if (used) continue;
      cur[i] = it;
      gen(i + 1);
    }
  };
  gen(0);
  for (std::uint64_t k = 0; k < d.profile_count(); ++k)
    allocs.push_back(feasible[rng() % feasible.size()]);
  *table_out = allocs;
  auto shared = std::make_shared<std::vector<Allocation>>(std::move(allocs));
  auto dom = std::make_shared<PreferenceDomain>(d);
  return [shared, dom](const PreferenceProfile& p) {
    std::uint64_t flat = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      std::uint64_t q = 0;
      while (!(dom->prefs[i][q] == p[i])) ++q;
      flat = flat * dom->prefs[i].size() + q;
    }
    return (*shared)[flat];
  };
}

}  // namespace

TEST_CASE("positive searches produce verified mechanisms") {
  auto [mk, s] = helpers::load_market("sd3/market.json");
  PreferenceDomain d = make_full_domain(mk, false);
  Rule rule = fpttc_rule(mk, s);

  for (unsigned req : {unsigned(kReqSosp), kReqOsp | kReqSimple,
                       kReqSosp | kReqSimple}) {
    SearchOutcome out = search_mechanism(mk, d, rule, req);
    REQUIRE(out.mechanism.has_value());
    const Mechanism& m = *out.mechanism;
    CHECK(validate(m).holds);
    CHECK(implements(m, rule).holds);
    if (req & kReqOsp) CHECK(check_osp(m).holds);
    if (req & kReqSosp) CHECK(check_sosp(m).holds);
    if (req & kReqSimple) CHECK(check_simple(m).holds);
  }
  CHECK(sosp_implementable_fpttc(mk, s, d));
  CHECK(simple_osp_implementable(mk, d, rule));
}

TEST_CASE("negative searches") {
  {
    auto [mk, s] = helpers::load_market("table8/market.json");
    PreferenceDomain d = domain_from_json(mk, load_json_file(helpers::fx("table8/domain.json")));
    CHECK(!simple_osp_implementable(mk, d, fpttc_rule(mk, s)));
    CHECK(sosp_implementable_fpttc(mk, s, d));  // without simplicity it exists
  }
  {
    auto [mk, s] = helpers::load_market("tableD1/market.json");
    PreferenceDomain d = domain_from_json(mk, load_json_file(helpers::fx("tableD1/domain.json")));
    Rule da = [&mk = mk, &s = s](const PreferenceProfile& p) {
      return apda_allocation(mk, s, p);
    };
    CHECK(!search_mechanism(mk, d, da, kReqOsp).mechanism.has_value());
  }
  {
    auto [mk, s] = helpers::load_market("tableG1/market.json");
    PreferenceDomain d = domain_from_json(mk, load_json_file(helpers::fx("tableG1/domain.json")));
    CHECK(!search_mechanism(mk, d, fpttc_rule(mk, s), kReqSosp).mechanism.has_value());
  }
}

TEST_CASE("searching a rule defined by a tree recovers implementability") {
  auto [mk, s] = helpers::load_market("sd3/market.json");
  auto m = mechanism_from_json(mk, load_json_file(helpers::fx("figureI1/mechanism.json")));
  auto shared = std::make_shared<Mechanism>(std::move(m));
  Rule rule = [shared](const PreferenceProfile& p) { return run_mechanism(*shared, p); };
  PreferenceDomain d = make_full_domain(mk, false);
  // the tree itself is strongly obviously dominant, so the search must succeed
  SearchOutcome sosp = search_mechanism(mk, d, rule, kReqSosp);
  CHECK(sosp.mechanism.has_value());
  // but no simple tree exists for this rule
  CHECK(!search_mechanism(mk, d, rule, kReqSimple | kReqOsp).mechanism.has_value());
}

TEST_CASE("single-edge moves never change existence") {
  std::mt19937 rng(314159);
  Market mk = helpers::toy_market(2, 2);
  auto prefs = all_preferences(mk, true);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<std::vector<Preference>> per_agent(2);
    for (int i = 0; i < 2; ++i) {
      size_t count = 2 + rng() % 2;
      while (per_agent[static_cast<size_t>(i)].size() < count) {
        const Preference& cand = prefs[rng() % prefs.size()];
        bool dup = false;
        for (const auto& have : per_agent[static_cast<size_t>(i)]) dup |= have == cand;
        if (!dup) per_agent[static_cast<size_t>(i)].push_back(cand);
      }
    }
    PreferenceDomain d = make_explicit_domain(mk, per_agent);
    std::vector<Allocation> table;
    Rule rule = random_rule(mk, d, rng, &table);
    for (unsigned req : {kReqSimple | kReqOsp, kReqSimple | kReqSosp}) {
      bool plain = search_mechanism(mk, d, rule, req, 4096, false).mechanism.has_value();
      bool burns = search_mechanism(mk, d, rule, req, 4096, true).mechanism.has_value();
      CHECK(plain == burns);
    }
  }
}

TEST_CASE("profile limit refusal") {
  auto [mk, s] = helpers::load_market("sd3/market.json");
  PreferenceDomain d = make_full_domain(mk, true);
  CHECK_THROWS_AS(search_mechanism(mk, d, fpttc_rule(mk, s), kReqOsp, 100),
                  ArgumentError);
}
