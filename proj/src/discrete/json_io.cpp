#include "cfq/discrete/json_io.hpp"

#include <fstream>

#include "cfq/error.hpp"

namespace cfq::discrete {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

PartialAssignment parse_partial(const EventSystem& sys, const json& obj, const std::string& where) {
  PartialAssignment out;
  if (obj.is_null()) return out;
  if (!obj.is_object()) throw InputError(where + " must be an object");
  for (const auto& [id, value] : obj.items()) {
    if (!value.is_string()) throw InputError(where + ": value of '" + id + "' must be a string");
    const std::size_t e = sys.index_of(id);
    out[e] = sys.value_index(e, value.get<std::string>());
  }
  return out;
}

json partial_to_json(const EventSystem& sys, const PartialAssignment& p) {
  json out = json::object();
  for (const auto& [e, v] : p) out[sys.event(e).id] = sys.event(e).domain[static_cast<std::size_t>(v)];
  return out;
}

}  // namespace

ScenarioDocument parse_scenario(const json& doc) {
  try {
    std::vector<Event> events;
    for (const auto& e : require(doc, "events", "document")) {
      Event ev;
      ev.id = require(e, "id", "event").get<std::string>();
      ev.kind = parse_event_kind(require(e, "kind", "event " + ev.id).get<std::string>());
      ev.domain = require(e, "domain", "event " + ev.id).get<std::vector<std::string>>();
      if (e.contains("setting")) ev.setting = e.at("setting").get<std::string>();
      events.push_back(std::move(ev));
    }
    std::vector<std::pair<std::string, std::string>> edges;
    if (doc.contains("precedes")) {
      for (const auto& pair : doc.at("precedes")) {
        if (!pair.is_array() || pair.size() != 2) throw InputError("precedes entries must be [from, to] pairs");
        edges.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
      }
    }
    EventSystem sys(std::move(events), edges);

    const json& beh = require(doc, "behavior", "document");
    Behavior behavior;
    for (std::size_t n : sys.noises()) {
      const Event& e = sys.event(n);
      if (!beh.contains("noise") || !beh.at("noise").contains(e.id)) {
        throw InputError("missing prior for noise '" + e.id + "'");
      }
      behavior.noise_priors.push_back(beh.at("noise").at(e.id).get<std::vector<double>>());
    }
    behavior.outcome_table.assign(sys.input_count(), {});
    std::vector<char> seen(sys.input_count(), 0);
    for (const auto& row : require(beh, "table", "behavior")) {
      const PartialAssignment given = parse_partial(sys, require(row, "given", "behavior row"), "behavior given");
      Assignment a(sys.size(), 0);
      for (std::size_t i : sys.settings()) {
        if (!given.count(i)) throw InputError("behavior row does not fix setting '" + sys.event(i).id + "'");
      }
      for (std::size_t i : sys.noises()) {
        if (!given.count(i)) throw InputError("behavior row does not fix noise '" + sys.event(i).id + "'");
      }
      for (const auto& [e, v] : given) {
        if (sys.event(e).kind == EventKind::outcome) throw InputError("behavior given may not fix an outcome");
        a[e] = v;
      }
      const std::size_t input = sys.input_index(a);
      if (seen[input]) throw InputError("behavior table repeats a setting/noise combination");
      seen[input] = 1;
      std::vector<double> dist(sys.outcome_count(), 0.0);
      for (const auto& entry : require(row, "outcomes", "behavior row")) {
        const PartialAssignment vals = parse_partial(sys, require(entry, "values", "outcome entry"), "outcome values");
        for (std::size_t i : sys.outcomes()) {
          if (!vals.count(i)) throw InputError("outcome entry does not fix '" + sys.event(i).id + "'");
          a[i] = vals.at(i);
        }
        dist[sys.outcome_index(a)] += require(entry, "p", "outcome entry").get<double>();
      }
      behavior.outcome_table[input] = std::move(dist);
    }

    Strategy strategy;
    const json& strat = require(doc, "strategy", "document");
    for (const auto& [id, rule_doc] : strat.items()) {
      const std::size_t s = sys.index_of(id);
      if (sys.event(s).kind != EventKind::setting) throw InputError("strategy given for non-setting '" + id + "'");
      const std::size_t dom = sys.event(s).domain.size();
      if (rule_doc.contains("constant")) {
        strategy[s] = SettingRule::constant(sys.value_index(s, rule_doc.at("constant").get<std::string>()), dom);
        continue;
      }
      SettingRule rule;
      for (const auto& p : require(rule_doc, "parents", "strategy " + id)) {
        rule.parents.push_back(sys.index_of(p.get<std::string>()));
      }
      std::size_t rows = 1;
      for (std::size_t p : rule.parents) rows *= sys.event(p).domain.size();
      rule.table.assign(rows, {});
      for (const auto& row : require(rule_doc, "table", "strategy " + id)) {
        const PartialAssignment given = parse_partial(sys, require(row, "given", "strategy row"), "strategy given");
        std::size_t r = 0, stride = 1;
        for (std::size_t p : rule.parents) {
          if (!given.count(p)) throw InputError("strategy row for '" + id + "' does not fix every parent");
          r += stride * static_cast<std::size_t>(given.at(p));
          stride *= sys.event(p).domain.size();
        }
        std::vector<double> dist(dom, 0.0);
        for (const auto& [value, p] : require(row, "dist", "strategy row").items()) {
          dist[static_cast<std::size_t>(sys.value_index(s, value))] = p.get<double>();
        }
        rule.table[r] = std::move(dist);
      }
      strategy[s] = std::move(rule);
    }

    Scenario scenario{std::move(sys), std::move(behavior), std::move(strategy)};
    validate(scenario);

    Query query;
    if (doc.contains("query")) {
      const json& q = doc.at("query");
      const EventSystem& s = scenario.system;
      query.evidence = parse_partial(s, q.value("evidence", json::object()), "evidence");
      query.antecedent = parse_partial(s, q.value("antecedent", json::object()), "antecedent");
      query.consequent = parse_partial(s, q.value("consequent", json::object()), "consequent");
    }
    return {std::move(scenario), std::move(query)};
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed scenario document: ") + e.what());
  }
}

ScenarioDocument load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& scenario, const Query& query) {
  const EventSystem& sys = scenario.system;
  json doc;
  doc["events"] = json::array();
  for (const Event& e : sys.events()) {
    json ev{{"id", e.id}, {"kind", to_string(e.kind)}, {"domain", e.domain}};
    if (e.setting) ev["setting"] = *e.setting;
    doc["events"].push_back(std::move(ev));
  }
  doc["precedes"] = json::array();
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (sys.causal().precedes(i, j)) doc["precedes"].push_back({sys.event(i).id, sys.event(j).id});

  json noise = json::object();
  for (std::size_t k = 0; k < sys.noises().size(); ++k) {
    noise[sys.event(sys.noises()[k]).id] = scenario.behavior.noise_priors[k];
  }
  json table = json::array();
  std::vector<char> done(sys.input_count(), 0);
  for (std::size_t k = 0; k < sys.assignment_count(); ++k) {
    const Assignment a = sys.decode(k);
    const std::size_t input = sys.input_index(a);
    if (done[input]) continue;
    done[input] = 1;
    PartialAssignment given;
    for (std::size_t i : sys.settings()) given[i] = a[i];
    for (std::size_t i : sys.noises()) given[i] = a[i];
    json outcomes = json::array();
    Assignment b = a;
    for (std::size_t o = 0; o < sys.outcome_count(); ++o) {
      std::size_t rem = o;
      PartialAssignment vals;
      for (std::size_t i : sys.outcomes()) {
        const std::size_t d = sys.event(i).domain.size();
        b[i] = static_cast<int>(rem % d);
        rem /= d;
        vals[i] = b[i];
      }
      const double p = scenario.behavior.outcome_table[input][sys.outcome_index(b)];
      if (p != 0.0) outcomes.push_back({{"values", partial_to_json(sys, vals)}, {"p", p}});
    }
    table.push_back({{"given", partial_to_json(sys, given)}, {"outcomes", std::move(outcomes)}});
  }
  doc["behavior"] = {{"noise", std::move(noise)}, {"table", std::move(table)}};

  json strat = json::object();
  for (const auto& [s, rule] : scenario.strategy) {
    const Event& e = sys.event(s);
    if (rule.is_constant()) {
      for (std::size_t v = 0; v < e.domain.size(); ++v)
        if (rule.table[0][v] == 1.0) strat[e.id] = {{"constant", e.domain[v]}};
      continue;
    }
    json parents = json::array();
    for (std::size_t p : rule.parents) parents.push_back(sys.event(p).id);
    json rows = json::array();
    for (std::size_t r = 0; r < rule.table.size(); ++r) {
      PartialAssignment given;
      std::size_t rem = r;
      for (std::size_t p : rule.parents) {
        const std::size_t d = sys.event(p).domain.size();
        given[p] = static_cast<int>(rem % d);
        rem /= d;
      }
      json dist = json::object();
      for (std::size_t v = 0; v < e.domain.size(); ++v) dist[e.domain[v]] = rule.table[r][v];
      rows.push_back({{"given", partial_to_json(sys, given)}, {"dist", std::move(dist)}});
    }
    strat[e.id] = {{"parents", std::move(parents)}, {"table", std::move(rows)}};
  }
  doc["strategy"] = std::move(strat);
  doc["query"] = {{"evidence", partial_to_json(sys, query.evidence)},
                  {"antecedent", partial_to_json(sys, query.antecedent)},
                  {"consequent", partial_to_json(sys, query.consequent)}};
  return doc;
}

}  // namespace cfq::discrete
