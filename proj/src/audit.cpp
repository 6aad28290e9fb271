#include "assign/audit.hpp"

#include <algorithm>

#include "assign/analysis.hpp"
#include "assign/apda.hpp"
#include "assign/ttc.hpp"

namespace assign {

namespace {

std::vector<int> mask_agents(std::uint64_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (mask & (1ull << i)) out.push_back(i);
  return out;
}

std::vector<Item> mask_objects(std::uint64_t mask, int m) {
  std::vector<Item> out;
  for (Item a = 1; a <= m; ++a)
    if (mask & (1ull << a)) out.push_back(a);
  return out;
}

}  // namespace

AuditReport check_dual_ownership(const Market& mk, const PriorityStructure& s,
                                 const PreferenceDomain& d) {
  AuditReport rep;
  rep.property = "dual-ownership";
  d.for_each_profile([&](const std::vector<int>& idx, const PreferenceProfile& p) {
    ++rep.profiles_checked;
    fpttc_run_steps(mk, s, p,
                    [&](int step, std::uint64_t am, std::uint64_t om) {
                      auto owners = top_owner_set(s, mask_agents(am, mk.n()),
                                                  mask_objects(om, mk.m()));
                      if (owners.size() > 2) {
                        rep.holds = false;
                        rep.witness = AuditWitness{
                            idx, step,
                            std::to_string(owners.size()) + " owners at step " +
                                std::to_string(step)};
                        return false;
                      }
                      return true;
                    });
    return rep.holds;
  });
  return rep;
}

AuditReport check_weak_serial_dictatorship(const Market& mk,
                                           const PriorityStructure& s,
                                           const PreferenceDomain& d) {
  if (d.kind != PreferenceDomain::Kind::NoOutside)
    throw ArgumentError(
        "weak serial dictatorship is defined on the no-outside domain");
  AuditReport rep;
  rep.property = "weak-serial-dictatorship";
  d.for_each_profile([&](const std::vector<int>& idx, const PreferenceProfile& p) {
    ++rep.profiles_checked;
    fpttc_run_steps(mk, s, p,
                    [&](int step, std::uint64_t am, std::uint64_t om) {
                      auto objects = mask_objects(om, mk.m());
                      if (objects.size() <= 2) return true;
                      auto owners = top_owner_set(s, mask_agents(am, mk.n()), objects);
                      if (owners.size() != 1) {
                        rep.holds = false;
                        rep.witness = AuditWitness{
                            idx, step,
                            std::to_string(objects.size()) + " objects, " +
                                std::to_string(owners.size()) + " owners"};
                        return false;
                      }
                      return true;
                    });
    return rep.holds;
  });
  return rep;
}

RuleComparison rules_equal(const Rule& rule1, const Rule& rule2,
                           const PreferenceDomain& d) {
  RuleComparison res;
  d.for_each_profile([&](const std::vector<int>& idx, const PreferenceProfile& p) {
    ++res.profiles_checked;
    if (rule1(p) != rule2(p)) {
      res.equal = false;
      res.witness_idx = idx;
      return false;
    }
    return true;
  });
  return res;
}

std::vector<PriorityStructure> all_priority_structures(const Market& mk) {
  std::vector<int> base(static_cast<size_t>(mk.n()));
  for (int i = 0; i < mk.n(); ++i) base[static_cast<size_t>(i)] = i;
  std::vector<PriorityOrder> perms;
  std::vector<int> perm = base;
  do {
    perms.push_back(PriorityOrder::from_order(perm, mk.n()));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<PriorityStructure> out;
  std::vector<size_t> idx(static_cast<size_t>(mk.m()), 0);
  for (;;) {
    PriorityStructure s;
    for (size_t k = 0; k < idx.size(); ++k) s.orders.push_back(perms[idx[k]]);
    out.push_back(std::move(s));
    int k = static_cast<int>(idx.size()) - 1;
    while (k >= 0 && ++idx[static_cast<size_t>(k)] == perms.size()) {
      idx[static_cast<size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

TheoremSweepReport verify_structure_theorems(int n, int m, int max_n, int max_m) {
  if (n > max_n || m > max_m) {
    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    double count = 1;
    for (int i = 0; i < m; ++i) count *= fact;
    throw ArgumentError("theorem sweep refused: " + std::to_string(count) +
                        " structures exceed the configured limit");
  }
  Market mk;
  for (int i = 1; i <= n; ++i) mk.agents.push_back(std::to_string(i));
  for (int a = 1; a <= m; ++a) mk.objects.push_back("o" + std::to_string(a));
  mk.check();
  auto restricted = make_full_domain(mk, false);
  auto unrestricted = make_full_domain(mk, true);

  TheoremSweepReport rep;
  auto structures = all_priority_structures(mk);
  for (size_t si = 0; si < structures.size(); ++si) {
    const auto& s = structures[si];
    ++rep.structures_checked;
    auto fail = [&](const std::string& what) {
      rep.all_pass = false;
      rep.failures.push_back("structure " + std::to_string(si) + ": " + what);
    };

    bool acyclic = !find_priority_cycle(mk, s).has_value();
    bool strongly = !find_weak_cycle(mk, s).has_value();
    bool ergin = !find_ergin_cycle(mk, s).has_value();

    if (ergin && !strongly) fail("Ergin-acyclic but not strongly acyclic");
    if (strongly && !acyclic) fail("strongly acyclic but not acyclic");

    bool dual_rest = check_dual_ownership(mk, s, restricted).holds;
    if (dual_rest != acyclic) fail("dual ownership (no-outside) vs acyclicity");

    bool dual_unrest = check_dual_ownership(mk, s, unrestricted).holds;
    if (dual_unrest != strongly)
      fail("dual ownership (with-outside) vs strong acyclicity");
    if (dual_unrest != is_dual_dictatorship(mk, s).holds)
      fail("dual ownership (with-outside) vs dual dictatorship");
    if (dual_unrest && !dual_rest) fail("unrestricted dual ownership not stronger");

    bool wsd = check_weak_serial_dictatorship(mk, s, restricted).holds;
    if (wsd != wsd_rank_condition(mk, s).holds)
      fail("weak serial dictatorship vs rank condition");

    bool same = apda_equals_fpttc(mk, s, unrestricted).equal;
    if (same != ergin) fail("deferred-acceptance equivalence vs Ergin-acyclicity");
  }
  return rep;
}

}  // namespace assign
