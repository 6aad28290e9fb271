// Command-line front end: run assignment rules, analyze priority structures,
// audit rule behavior, and verify or search extensive-form mechanisms.
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "assign/analysis.hpp"
#include "assign/apda.hpp"
#include "assign/audit.hpp"
#include "assign/io.hpp"
#include "assign/mechanism.hpp"
#include "assign/search.hpp"
#include "assign/ttc.hpp"

namespace {

using assign::Json;

constexpr const char* kVersion = "1.0.0";

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

assign::PreferenceDomain domain_from_arg(const assign::Market& mk,
                                         const std::string& arg) {
  if (arg == "no-outside") return assign::make_full_domain(mk, false);
  if (arg == "with-outside") return assign::make_full_domain(mk, true);
  return assign::domain_from_json(mk, assign::load_json_file(arg));
}

Json witness_names(const assign::Market& mk, const std::vector<int>& agents,
                   const std::vector<assign::Item>& objects) {
  Json w;
  Json a = Json::array();
  for (int i : agents) a.push_back(mk.agents[static_cast<size_t>(i)]);
  Json o = Json::array();
  for (assign::Item it : objects) o.push_back(mk.item_token(it));
  w["agents"] = a;
  w["objects"] = o;
  return w;
}

int cmd_run(const std::string& kind, const std::string& market_file,
            const std::string& profile_file, bool trace) {
  auto [mk, s] = assign::market_from_json(assign::load_json_file(market_file));
  auto p = assign::profile_from_json(mk, assign::load_json_file(profile_file));
  if (kind == "fpttc") {
    auto t = assign::run_fpttc(mk, s, p);
    if (trace) {
      Json j;
      j["allocation"] = assign::allocation_to_json(mk, t.allocation);
      j["trace"] = assign::trace_to_json(mk, t)["steps"];
      emit(j);
    } else {
      emit(assign::allocation_to_json(mk, t.allocation));
    }
  } else {
    auto r = assign::run_apda(mk, s, p);
    if (trace) {
      Json j;
      j["allocation"] = assign::allocation_to_json(mk, r.allocation);
      j["trace"] = assign::apda_rounds_to_json(mk, r.rounds);
      emit(j);
    } else {
      emit(assign::allocation_to_json(mk, r.allocation));
    }
  }
  return 0;
}

int cmd_analyze(const std::string& market_file) {
  auto [mk, s] = assign::market_from_json(assign::load_json_file(market_file));
  Json j;
  Json w = Json::object();
  auto pc = assign::find_priority_cycle(mk, s);
  j["acyclic"] = !pc.has_value();
  if (pc) {
    Json c = witness_names(mk, {pc->core.agents.begin(), pc->core.agents.end()},
                           {pc->core.objects.begin(), pc->core.objects.end()});
    Json sup = Json::array();
    for (auto [i, a] : pc->support) {
      Json pair = Json::array();
      pair.push_back(mk.agents[static_cast<size_t>(i)]);
      pair.push_back(mk.item_token(a));
      sup.push_back(pair);
    }
    c["support"] = sup;
    w["priority_cycle"] = c;
  }
  auto wc = assign::find_weak_cycle(mk, s);
  j["strongly_acyclic"] = !wc.has_value();
  if (wc)
    w["weak_cycle"] = witness_names(mk, {wc->agents.begin(), wc->agents.end()},
                                    {wc->objects.begin(), wc->objects.end()});
  auto ec = assign::find_ergin_cycle(mk, s);
  j["ergin_acyclic"] = !ec.has_value();
  if (ec)
    w["ergin_cycle"] = witness_names(mk, {ec->agents.begin(), ec->agents.end()},
                                     {ec->objects.begin(), ec->objects.end()});
  auto dd = assign::is_dual_dictatorship(mk, s);
  j["dual_dictatorship"] = dd.holds;
  if (!dd.holds)
    w["dual_dictatorship"] = witness_names(mk, dd.agents_witness, dd.objects_witness);
  j["serial_dictatorship"] = assign::is_serial_dictatorship(s);
  auto rc = assign::wsd_rank_condition(mk, s);
  j["wsd_rank_condition"] = rc.holds;
  if (!rc.holds) {
    Json t;
    t["agent"] = mk.agents[static_cast<size_t>(rc.agent)];
    t["object_a"] = mk.item_token(rc.object_a);
    t["object_b"] = mk.item_token(rc.object_b);
    w["wsd_rank_condition"] = t;
  }
  j["witnesses"] = w;
  emit(j);
  return 0;
}

int cmd_audit_rule(const std::string& market_file, const std::string& check,
                   const std::string& domain_arg) {
  auto [mk, s] = assign::market_from_json(assign::load_json_file(market_file));
  auto d = domain_from_arg(mk, domain_arg);
  if (check == "dual-ownership") {
    auto rep = assign::check_dual_ownership(mk, s, d);
    emit(assign::audit_report_to_json(mk, d, rep));
    return rep.holds ? 0 : 1;
  }
  if (check == "wsd") {
    auto rep = assign::check_weak_serial_dictatorship(mk, s, d);
    emit(assign::audit_report_to_json(mk, d, rep));
    return rep.holds ? 0 : 1;
  }
  if (check == "apda-equivalence") {
    auto res = assign::apda_equals_fpttc(mk, s, d);
    Json j;
    j["property"] = "apda-equivalence";
    j["holds"] = res.equal;
    j["profiles_checked"] = res.profiles_checked;
    if (res.witness_idx)
      j["witness"] = Json{
          {"profile", assign::profile_to_json(mk, d.profile(*res.witness_idx))}};
    emit(j);
    return res.equal ? 0 : 1;
  }
  throw assign::ArgumentError("unknown check: " + check);
}

int cmd_audit_theorems(int n, int m, int max_n, int max_m) {
  auto rep = assign::verify_structure_theorems(n, m, max_n, max_m);
  Json j;
  j["all_pass"] = rep.all_pass;
  j["structures_checked"] = rep.structures_checked;
  j["failures"] = rep.failures;
  emit(j);
  return rep.all_pass ? 0 : 1;
}

int cmd_mech_verify(const std::string& market_file, const std::string& mech_file,
                    const std::string& props, bool check_implements_fpttc) {
  auto [mk, s] = assign::market_from_json(assign::load_json_file(market_file));
  auto m = assign::mechanism_from_json(mk, assign::load_json_file(mech_file));
  Json j;
  bool all = true;
  auto record = [&](const assign::VerificationVerdict& v) {
    j[v.property] = assign::verdict_to_json(v);
    all = all && v.holds;
  };
  auto valid = assign::validate(m);
  for (const std::string prop : {"valid", "osp", "sosp", "simple"}) {
    if (props.find(prop) == std::string::npos) continue;
    if (prop == "valid") record(valid);
    if (!valid.holds && prop != "valid") continue;
    if (prop == "osp") record(assign::check_osp(m));
    if (prop == "sosp") record(assign::check_sosp(m));
    if (prop == "simple") record(assign::check_simple(m));
  }
  if (check_implements_fpttc) {
    record(assign::implements(m, [&](const assign::PreferenceProfile& p) {
      return assign::fpttc_allocation(mk, s, p);
    }));
  }
  emit(j);
  return all ? 0 : 1;
}

int cmd_mech_run(const std::string& market_file, const std::string& mech_file,
                 const std::string& profile_file) {
  auto [mk, s] = assign::market_from_json(assign::load_json_file(market_file));
  (void)s;
  auto m = assign::mechanism_from_json(mk, assign::load_json_file(mech_file));
  auto p = assign::profile_from_json(mk, assign::load_json_file(profile_file));
  emit(assign::allocation_to_json(mk, assign::run_mechanism(m, p)));
  return 0;
}

int cmd_mech_search(const std::string& market_file, const std::string& domain_arg,
                    const std::string& require, const std::string& rule_arg,
                    std::uint64_t limit) {
  auto [mk, s] = assign::market_from_json(assign::load_json_file(market_file));
  auto d = domain_from_arg(mk, domain_arg);
  unsigned req = 0;
  for (const auto& part : {std::pair{"simple", assign::kReqSimple},
                           {"osp", assign::kReqOsp},
                           {"sosp", assign::kReqSosp}})
    if (require.find(part.first) != std::string::npos) req |= part.second;
  if (req == 0) throw assign::ArgumentError("empty property requirement");

  assign::Rule rule;
  if (rule_arg == "fpttc") {
    rule = [&mk = mk, &s = s](const assign::PreferenceProfile& p) {
      return assign::fpttc_allocation(mk, s, p);
    };
  } else if (rule_arg == "apda") {
    rule = [&mk = mk, &s = s](const assign::PreferenceProfile& p) {
      return assign::apda_allocation(mk, s, p);
    };
  } else if (rule_arg.rfind("mech:", 0) == 0) {
    auto rm = std::make_shared<assign::Mechanism>(assign::mechanism_from_json(
        mk, assign::load_json_file(rule_arg.substr(5))));
    rule = [rm](const assign::PreferenceProfile& p) {
      return assign::run_mechanism(*rm, p);
    };
  } else {
    throw assign::ArgumentError("unknown rule: " + rule_arg);
  }

  auto out = assign::search_mechanism(mk, d, rule, req, limit);
  Json j;
  j["states_explored"] = out.states_explored;
  if (out.mechanism) {
    j["result"] = "found";
    j["mechanism"] = assign::mechanism_to_json(*out.mechanism);
    emit(j);
    return 0;
  }
  j["result"] = "none";
  emit(j);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Priority-based assignment rules, structure analysis, and "
               "extensive-form mechanism verification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int jobs = 1;
  if (const char* env = std::getenv("MATCHTOOL_JOBS")) jobs = std::atoi(env);
  app.add_option("--jobs", jobs, "worker count for profile enumeration");

  std::string market_file, profile_file, mech_file;
  std::string domain_arg = "no-outside";
  bool trace = false;

  auto* run = app.add_subcommand("run", "execute an assignment rule");
  std::string run_kind;
  run->add_option("kind", run_kind, "fpttc or apda")
      ->required()
      ->check(CLI::IsMember({"fpttc", "apda"}));
  run->add_option("--market", market_file, "market JSON file")->required();
  run->add_option("--profile", profile_file, "profile JSON file")->required();
  run->add_flag("--trace", trace, "emit per-step trace");

  auto* analyze = app.add_subcommand("analyze", "analyze a priority structure");
  std::string analyze_kind = "structure";
  analyze->add_option("kind", analyze_kind)->check(CLI::IsMember({"structure"}));
  analyze->add_option("--market", market_file, "market JSON file")->required();

  auto* audit = app.add_subcommand("audit", "behavioral audits");
  auto* audit_rule = audit->add_subcommand("rule", "audit the rule on a domain");
  std::string check;
  audit_rule->add_option("--market", market_file)->required();
  audit_rule
      ->add_option("--check", check,
                   "dual-ownership, wsd, or apda-equivalence")
      ->required();
  audit_rule->add_option("--domain", domain_arg,
                         "no-outside, with-outside, or a domain file");
  auto* audit_thms = audit->add_subcommand("theorems", "exhaustive theorem sweep");
  int tn = 3, tm = 3, tmax_n = 3, tmax_m = 3;
  audit_thms->add_option("--n", tn, "agents");
  audit_thms->add_option("--m", tm, "objects");
  audit_thms->add_option("--max-n", tmax_n, "refusal limit on agents");
  audit_thms->add_option("--max-m", tmax_m, "refusal limit on objects");
  audit->require_subcommand(1);

  auto* mech = app.add_subcommand("mech", "extensive-form mechanisms");
  auto* mech_verify = mech->add_subcommand("verify", "verify mechanism properties");
  std::string props = "valid,osp,sosp,simple";
  bool impl_fpttc = false;
  mech_verify->add_option("--market", market_file)->required();
  mech_verify->add_option("--mechanism", mech_file)->required();
  mech_verify->add_option("--props", props, "subset of valid,osp,sosp,simple");
  mech_verify->add_flag("--implements-fpttc", impl_fpttc,
                        "also check against the market's top-trading-cycles rule");
  auto* mech_run = mech->add_subcommand("run", "run a mechanism on a profile");
  mech_run->add_option("--market", market_file)->required();
  mech_run->add_option("--mechanism", mech_file)->required();
  mech_run->add_option("--profile", profile_file)->required();
  auto* mech_search = mech->add_subcommand("search", "synthesize a mechanism");
  std::string require = "osp", rule_arg = "fpttc";
  std::uint64_t limit = 4096;
  mech_search->add_option("--market", market_file)->required();
  mech_search->add_option("--domain", domain_arg)->required();
  mech_search->add_option("--require", require, "subset of simple,osp,sosp");
  mech_search->add_option("--rule", rule_arg, "fpttc, apda, or mech:FILE");
  mech_search->add_option("--limit", limit, "profile count limit");
  mech->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems map to exit 2
  }
  if (jobs < 1) {
    std::cerr << "jobs must be positive\n";
    return 2;
  }

  try {
    if (*run) return cmd_run(run_kind, market_file, profile_file, trace);
    if (*analyze) return cmd_analyze(market_file);
    if (*audit_rule) return cmd_audit_rule(market_file, check, domain_arg);
    if (*audit_thms) return cmd_audit_theorems(tn, tm, tmax_n, tmax_m);
    if (*mech_verify)
      return cmd_mech_verify(market_file, mech_file, props, impl_fpttc);
    if (*mech_run) return cmd_mech_run(market_file, mech_file, profile_file);
    if (*mech_search)
      return cmd_mech_search(market_file, domain_arg, require, rule_arg, limit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
