#pragma once

#include <string>

#include <json.hpp>

#include "cfq/discrete/calculus.hpp"
#include "cfq/discrete/scenario.hpp"

namespace cfq::discrete {

struct ScenarioDocument {
  Scenario scenario;
  Query query;
};

/// Reads the scenario document:
///
///   {"events":   [{"id", "kind", "domain", "setting"?}],
///    "precedes": [[from, to]],
///    "behavior": {"noise": {id: [p...]},
///                 "table": [{"given": {id: value}, "outcomes": [{"values": {id: value}, "p": x}]}]},
///    "strategy": {id: {"constant": value} | {"parents": [id], "table": [{"given": {...}, "dist": {value: p}}]}},
///    "query":    {"evidence": {...}, "antecedent": {...}, "consequent": {...}}}
///
/// Outcome combinations missing from a behavior row have probability zero.
/// Throws InputError on any structural problem.
ScenarioDocument parse_scenario(const nlohmann::json& doc);
ScenarioDocument load_scenario(const std::string& path);

nlohmann::json to_json(const Scenario& scenario, const Query& query);

}  // namespace cfq::discrete
