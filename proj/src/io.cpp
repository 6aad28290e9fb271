#include "assign/io.hpp"

#include <fstream>

namespace assign {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ArgumentError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

std::pair<Market, PriorityStructure> market_from_json(const Json& j) {
  Market mk;
  if (!j.contains("agents") || !j.contains("objects"))
    throw ArgumentError("market file needs agents and objects");
  for (const auto& a : j.at("agents")) mk.agents.push_back(a.get<std::string>());
  for (const auto& o : j.at("objects")) mk.objects.push_back(o.get<std::string>());
  mk.check();
  PriorityStructure s;
  if (j.contains("priorities")) {
    s.orders.resize(static_cast<size_t>(mk.m()));
    std::vector<bool> have(static_cast<size_t>(mk.m()), false);
    for (const auto& [obj, arr] : j.at("priorities").items()) {
      Item it = mk.object_item(obj);
      if (it < 0) throw ArgumentError("priority for unknown object: " + obj);
      std::vector<int> ord;
      for (const auto& a : arr) {
        int i = mk.agent_index(a.get<std::string>());
        if (i < 0) throw ArgumentError("priority ranks unknown agent");
        ord.push_back(i);
      }
      s.orders[static_cast<size_t>(it - 1)] = PriorityOrder::from_order(ord, mk.n());
      have[static_cast<size_t>(it - 1)] = true;
    }
    for (bool h : have)
      if (!h) throw ArgumentError("priority missing for an object");
  }
  return {mk, s};
}

Json market_to_json(const Market& mk, const PriorityStructure& s) {
  Json j;
  j["agents"] = mk.agents;
  j["objects"] = mk.objects;
  Json pr = Json::object();
  for (Item a = 1; a <= mk.m(); ++a) {
    Json arr = Json::array();
    for (int i : s.of(a).order()) arr.push_back(mk.agents[static_cast<size_t>(i)]);
    pr[mk.item_token(a)] = arr;
  }
  j["priorities"] = pr;
  return j;
}

Preference preference_from_json(const Market& mk, const Json& j) {
  std::vector<Item> order;
  for (const auto& tok : j) order.push_back(mk.item_from_token(tok.get<std::string>()));
  if (static_cast<int>(order.size()) == mk.m()) order.push_back(kOutside);
  return Preference::from_order(std::move(order), mk.m());
}

Json preference_to_json(const Market& mk, const Preference& p) {
  Json arr = Json::array();
  for (Item it : p.order()) arr.push_back(mk.item_token(it));
  return arr;
}

PreferenceProfile profile_from_json(const Market& mk, const Json& j) {
  PreferenceProfile p(static_cast<size_t>(mk.n()));
  std::vector<bool> have(static_cast<size_t>(mk.n()), false);
  for (const auto& [agent, arr] : j.items()) {
    int i = mk.agent_index(agent);
    if (i < 0) throw ArgumentError("profile names unknown agent: " + agent);
    p[static_cast<size_t>(i)] = preference_from_json(mk, arr);
    have[static_cast<size_t>(i)] = true;
  }
  for (bool h : have)
    if (!h) throw ArgumentError("profile missing an agent");
  return p;
}

Json profile_to_json(const Market& mk, const PreferenceProfile& p) {
  Json j = Json::object();
  for (int i = 0; i < mk.n(); ++i)
    j[mk.agents[static_cast<size_t>(i)]] =
        preference_to_json(mk, p[static_cast<size_t>(i)]);
  return j;
}

PreferenceDomain domain_from_json(const Market& mk, const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "no-outside") return make_full_domain(mk, false);
  if (kind == "with-outside") return make_full_domain(mk, true);
  if (kind != "explicit") throw ArgumentError("unknown domain kind: " + kind);
  std::vector<std::vector<Preference>> per_agent(static_cast<size_t>(mk.n()));
  for (const auto& [agent, lists] : j.at("prefs").items()) {
    int i = mk.agent_index(agent);
    if (i < 0) throw ArgumentError("domain names unknown agent: " + agent);
    for (const auto& arr : lists)
      per_agent[static_cast<size_t>(i)].push_back(preference_from_json(mk, arr));
  }
  return make_explicit_domain(mk, std::move(per_agent));
}

Json domain_to_json(const Market& mk, const PreferenceDomain& d) {
  Json j;
  switch (d.kind) {
    case PreferenceDomain::Kind::NoOutside:
      j["kind"] = "no-outside";
      return j;
    case PreferenceDomain::Kind::WithOutside:
      j["kind"] = "with-outside";
      return j;
    case PreferenceDomain::Kind::Explicit:
      break;
  }
  j["kind"] = "explicit";
  Json prefs = Json::object();
  for (int i = 0; i < mk.n(); ++i) {
    Json lists = Json::array();
    for (const auto& p : d.prefs[static_cast<size_t>(i)])
      lists.push_back(preference_to_json(mk, p));
    prefs[mk.agents[static_cast<size_t>(i)]] = lists;
  }
  j["prefs"] = prefs;
  return j;
}

Json allocation_to_json(const Market& mk, const Allocation& a) {
  Json j = Json::object();
  for (int i = 0; i < mk.n(); ++i)
    j[mk.agents[static_cast<size_t>(i)]] = mk.item_token(a[static_cast<size_t>(i)]);
  return j;
}

Json trace_to_json(const Market& mk, const FpttcTrace& t) {
  Json steps = Json::array();
  for (const auto& st : t.steps) {
    Json s;
    s["step"] = st.step;
    Json ra = Json::array();
    for (int i : st.remaining_agents) ra.push_back(mk.agents[static_cast<size_t>(i)]);
    s["remaining_agents"] = ra;
    Json ro = Json::array();
    for (Item a : st.remaining_objects) ro.push_back(mk.item_token(a));
    s["remaining_objects"] = ro;
    Json own = Json::object();
    for (int i : st.remaining_agents) {
      Json objs = Json::array();
      for (Item a : st.ownership[static_cast<size_t>(i)]) objs.push_back(mk.item_token(a));
      own[mk.agents[static_cast<size_t>(i)]] = objs;
    }
    s["ownership"] = own;
    Json ptr = Json::object();
    for (int i : st.remaining_agents)
      ptr[mk.agents[static_cast<size_t>(i)]] =
          mk.agents[static_cast<size_t>(st.pointer[static_cast<size_t>(i)])];
    s["pointers"] = ptr;
    Json cyc = Json::array();
    for (const auto& c : st.cycles) {
      Json one = Json::array();
      for (int i : c) one.push_back(mk.agents[static_cast<size_t>(i)]);
      cyc.push_back(one);
    }
    s["cycles"] = cyc;
    Json asg = Json::object();
    for (const auto& [i, it] : st.assignments)
      asg[mk.agents[static_cast<size_t>(i)]] = mk.item_token(it);
    s["assignments"] = asg;
    steps.push_back(s);
  }
  Json j;
  j["steps"] = steps;
  return j;
}

Json apda_rounds_to_json(const Market& mk, const std::vector<ApdaRoundRecord>& rounds) {
  Json arr = Json::array();
  for (const auto& r : rounds) {
    Json j;
    j["round"] = r.round;
    Json apps = Json::object();
    for (const auto& [i, it] : r.applications)
      apps[mk.agents[static_cast<size_t>(i)]] = mk.item_token(it);
    j["applications"] = apps;
    Json hold = Json::object();
    for (const auto& [a, i] : r.tentative_holders)
      hold[mk.item_token(a)] = mk.agents[static_cast<size_t>(i)];
    j["tentative_holders"] = hold;
    Json rej = Json::array();
    for (int i : r.rejected) rej.push_back(mk.agents[static_cast<size_t>(i)]);
    j["rejected"] = rej;
    Json fin = Json::array();
    for (int i : r.finalized_outside) fin.push_back(mk.agents[static_cast<size_t>(i)]);
    j["finalized_outside"] = fin;
    arr.push_back(j);
  }
  return arr;
}

namespace {

// Pattern language for edge labels:
//   top=a1[,a2...]    most preferred item among all items is one of the listed
//   before=x,y[,z...] x is preferred to every one of y, z, ...
//   order=x,y,z,...   listed items appear in exactly this relative order
std::function<bool(const Preference&)> parse_pattern(const Market& mk,
                                                     const std::string& pat) {
  size_t eq = pat.find('=');
  if (eq == std::string::npos) throw ArgumentError("bad label pattern: " + pat);
  std::string op = pat.substr(0, eq);
  std::vector<Item> items;
  for (const auto& tok : split_commas(pat.substr(eq + 1)))
    items.push_back(mk.item_from_token(tok));
  if (items.empty()) throw ArgumentError("bad label pattern: " + pat);
  if (op == "top") {
    return [items](const Preference& p) {
      return std::find(items.begin(), items.end(), p.top()) != items.end();
    };
  }
  if (op == "before") {
    if (items.size() < 2) throw ArgumentError("before needs two items: " + pat);
    return [items](const Preference& p) {
      for (size_t k = 1; k < items.size(); ++k)
        if (!p.prefers(items[0], items[k])) return false;
      return true;
    };
  }
  if (op == "order") {
    if (items.size() < 2) throw ArgumentError("order needs two items: " + pat);
    return [items](const Preference& p) {
      for (size_t k = 1; k < items.size(); ++k)
        if (!p.prefers(items[k - 1], items[k])) return false;
      return true;
    };
  }
  throw ArgumentError("unknown label pattern: " + op);
}

}  // namespace

Mechanism mechanism_from_json(const Market& mk, const Json& j) {
  Mechanism m;
  m.market = mk;
  m.domain = domain_from_json(mk, j.at("domain"));

  for (const auto& nj : j.at("nodes")) {
    MechNode node;
    node.id = nj.at("id").get<std::string>();
    if (nj.contains("alloc")) {
      Allocation a(static_cast<size_t>(mk.n()), kOutside);
      for (const auto& [agent, tok] : nj.at("alloc").items()) {
        int i = mk.agent_index(agent);
        if (i < 0) throw ArgumentError("allocation names unknown agent: " + agent);
        a[static_cast<size_t>(i)] = mk.item_from_token(tok.get<std::string>());
      }
      node.alloc = std::move(a);
    } else {
      int i = mk.agent_index(nj.at("agent").get<std::string>());
      if (i < 0) throw ArgumentError("node has unknown mover");
      node.agent = i;
    }
    m.nodes.push_back(std::move(node));
  }
  m.root = m.node_index(j.at("root").get<std::string>());
  if (m.root < 0) throw ArgumentError("unknown root node");

  std::vector<Json> raw_labels;
  for (const auto& ej : j.at("edges")) {
    MechEdge e;
    e.from = m.node_index(ej.at("from").get<std::string>());
    e.to = m.node_index(ej.at("to").get<std::string>());
    if (e.from < 0 || e.to < 0) throw ArgumentError("edge names unknown node");
    e.raw_label = ej.at("label").dump();
    raw_labels.push_back(ej.at("label"));
    m.nodes[static_cast<size_t>(e.from)].out.push_back(
        static_cast<int>(m.edges.size()));
    m.edges.push_back(std::move(e));
  }

  // Resolve labels along the tree so patterns can intersect with the label
  // inherited from the mover's previous edge.
  struct Frame {
    int node;
    std::vector<std::optional<std::vector<int>>> inherited;
  };
  std::vector<bool> seen(m.nodes.size(), false);
  std::vector<Frame> stack;
  stack.push_back({m.root, std::vector<std::optional<std::vector<int>>>(
                               static_cast<size_t>(mk.n()))});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (seen[static_cast<size_t>(fr.node)]) continue;
    seen[static_cast<size_t>(fr.node)] = true;
    const auto& node = m.nodes[static_cast<size_t>(fr.node)];
    if (node.alloc.has_value()) continue;
    if (node.agent < 0) continue;
    const auto& prefs = m.domain.prefs[static_cast<size_t>(node.agent)];
    std::vector<int> allowed;
    if (fr.inherited[static_cast<size_t>(node.agent)]) {
      allowed = *fr.inherited[static_cast<size_t>(node.agent)];
    } else {
      allowed.resize(prefs.size());
      for (size_t k = 0; k < allowed.size(); ++k) allowed[k] = static_cast<int>(k);
    }
    for (int ei : node.out) {
      auto& edge = m.edges[static_cast<size_t>(ei)];
      const Json& lab = raw_labels[static_cast<size_t>(ei)];
      std::vector<int> resolved;
      if (lab.contains("explicit")) {
        for (const auto& entry : lab.at("explicit")) {
          if (entry.is_number_integer()) {
            int q = entry.get<int>();
            if (q < 0 || q >= static_cast<int>(prefs.size()))
              throw ArgumentError("explicit label index out of range");
            resolved.push_back(q);
          } else {
            Preference p = preference_from_json(mk, entry);
            int q = -1;
            for (size_t k = 0; k < prefs.size(); ++k)
              if (prefs[k] == p) q = static_cast<int>(k);
            if (q < 0)
              throw ArgumentError("explicit label preference outside the domain");
            resolved.push_back(q);
          }
        }
        std::sort(resolved.begin(), resolved.end());
        resolved.erase(std::unique(resolved.begin(), resolved.end()), resolved.end());
      } else if (lab.contains("pattern")) {
        auto pred = parse_pattern(mk, lab.at("pattern").get<std::string>());
        for (int q : allowed)
          if (pred(prefs[static_cast<size_t>(q)])) resolved.push_back(q);
      } else {
        throw ArgumentError("edge label needs explicit or pattern");
      }
      edge.label = std::move(resolved);
      Frame child{edge.to, fr.inherited};
      child.inherited[static_cast<size_t>(node.agent)] = edge.label;
      stack.push_back(std::move(child));
    }
  }
  return m;
}

Json mechanism_to_json(const Mechanism& m) {
  Json j;
  j["domain"] = domain_to_json(m.market, m.domain);
  j["root"] = m.nodes[static_cast<size_t>(m.root)].id;
  Json nodes = Json::array();
  for (const auto& node : m.nodes) {
    Json nj;
    nj["id"] = node.id;
    if (node.alloc.has_value())
      nj["alloc"] = allocation_to_json(m.market, *node.alloc);
    else
      nj["agent"] = m.market.agents[static_cast<size_t>(node.agent)];
    nodes.push_back(nj);
  }
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& e : m.edges) {
    Json ej;
    ej["from"] = m.nodes[static_cast<size_t>(e.from)].id;
    ej["to"] = m.nodes[static_cast<size_t>(e.to)].id;
    if (!e.raw_label.empty()) {
      ej["label"] = Json::parse(e.raw_label);
    } else {
      int mover = m.nodes[static_cast<size_t>(e.from)].agent;
      Json lists = Json::array();
      for (int q : e.label)
        lists.push_back(preference_to_json(
            m.market,
            m.domain.prefs[static_cast<size_t>(mover)][static_cast<size_t>(q)]));
      ej["label"] = Json{{"explicit", lists}};
    }
    edges.push_back(ej);
  }
  j["edges"] = edges;
  return j;
}

Json audit_report_to_json(const Market& mk, const PreferenceDomain& d,
                          const AuditReport& rep) {
  Json j;
  j["property"] = rep.property;
  j["holds"] = rep.holds;
  j["profiles_checked"] = rep.profiles_checked;
  if (rep.witness) {
    Json w;
    w["profile"] = profile_to_json(mk, d.profile(rep.witness->pref_indices));
    w["step"] = rep.witness->step;
    w["detail"] = rep.witness->detail;
    j["witness"] = w;
  }
  return j;
}

Json verdict_to_json(const VerificationVerdict& v) {
  Json j;
  j["property"] = v.property;
  j["holds"] = v.holds;
  if (!v.holds) {
    Json w;
    if (!v.witness_node.empty()) w["node"] = v.witness_node;
    w["detail"] = v.witness;
    j["witness"] = w;
  }
  return j;
}

}  // namespace assign
