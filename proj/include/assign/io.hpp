#pragma once

#include <string>
#include <utility>

#include "json.hpp"

#include "assign/apda.hpp"
#include "assign/audit.hpp"
#include "assign/core.hpp"
#include "assign/mechanism.hpp"
#include "assign/ttc.hpp"

namespace assign {

using Json = nlohmann::ordered_json;

Json load_json_file(const std::string& path);

std::pair<Market, PriorityStructure> market_from_json(const Json& j);
Json market_to_json(const Market& mk, const PriorityStructure& s);

PreferenceProfile profile_from_json(const Market& mk, const Json& j);
Json profile_to_json(const Market& mk, const PreferenceProfile& p);

Preference preference_from_json(const Market& mk, const Json& j);
Json preference_to_json(const Market& mk, const Preference& p);

PreferenceDomain domain_from_json(const Market& mk, const Json& j);
Json domain_to_json(const Market& mk, const PreferenceDomain& d);

Json allocation_to_json(const Market& mk, const Allocation& a);

Json trace_to_json(const Market& mk, const FpttcTrace& t);
Json apda_rounds_to_json(const Market& mk, const std::vector<ApdaRoundRecord>& rounds);

Mechanism mechanism_from_json(const Market& mk, const Json& j);
Json mechanism_to_json(const Mechanism& m);

Json audit_report_to_json(const Market& mk, const PreferenceDomain& d,
                          const AuditReport& rep);
Json verdict_to_json(const VerificationVerdict& v);

}  // namespace assign
