#pragma once

#include <string>
#include <utility>

#include "assign/io.hpp"

namespace helpers {

inline std::string fx(const std::string& rel) {
  return std::string(FIXTURES_DIR) + "/" + rel;
}

inline std::pair<assign::Market, assign::PriorityStructure> load_market(
    const std::string& rel) {
  return assign::market_from_json(assign::load_json_file(fx(rel)));
}

// Builds a small market with numbered agents and objects o1..om.
inline assign::Market toy_market(int n, int m) {
  assign::Market mk;
  for (int i = 1; i <= n; ++i) mk.agents.push_back(std::to_string(i));
  for (int a = 1; a <= m; ++a) mk.objects.push_back("o" + std::to_string(a));
  mk.check();
  return mk;
}

}  // namespace helpers
