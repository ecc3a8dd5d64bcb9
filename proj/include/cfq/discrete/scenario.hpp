#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cfq::discrete {

enum class EventKind { setting, outcome, noise };

const char* to_string(EventKind kind);
EventKind parse_event_kind(const std::string& text);

struct Event {
  std::string id;
  EventKind kind = EventKind::setting;
  std::vector<std::string> domain;
  /// For outcomes: id of the setting that selects this measurement, if known.
  std::optional<std::string> setting;
};

/// Value index per event, in event order.
using Assignment = std::vector<int>;
/// Event index -> value index.
using PartialAssignment = std::map<std::size_t, int>;

/// Strict precedence over event indices, stored as its transitive closure.
class CausalStructure {
 public:
  CausalStructure() = default;
  /// Throws InputError on out-of-range endpoints or a cycle.
  CausalStructure(std::size_t n_events, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const { return n_; }
  /// True when `later` is reachable from `earlier` along one or more edges.
  bool precedes(std::size_t earlier, std::size_t later) const { return closure_[earlier * n_ + later] != 0; }

 private:
  std::size_t n_ = 0;
  std::vector<char> closure_;
};

/// The finite event set Omega with its causal order and index arithmetic.
class EventSystem {
 public:
  EventSystem() = default;
  EventSystem(std::vector<Event> events, const std::vector<std::pair<std::string, std::string>>& precedes);

  std::size_t size() const { return events_.size(); }
  const std::vector<Event>& events() const { return events_; }
  const Event& event(std::size_t i) const { return events_.at(i); }
  const CausalStructure& causal() const { return causal_; }

  /// Throws InputError for unknown ids.
  std::size_t index_of(const std::string& id) const;
  int value_index(std::size_t event, const std::string& value) const;

  const std::vector<std::size_t>& settings() const { return settings_; }
  const std::vector<std::size_t>& outcomes() const { return outcomes_; }
  const std::vector<std::size_t>& noises() const { return noises_; }

  /// Number of full assignments of Omega.
  std::size_t assignment_count() const { return assignment_count_; }
  Assignment decode(std::size_t full_index) const;
  std::size_t encode(const Assignment& a) const;

  /// Mixed-radix index over the settings then noises (the inputs of wp).
  std::size_t input_count() const { return input_count_; }
  std::size_t input_index(const Assignment& a) const;
  /// Mixed-radix index over the outcomes.
  std::size_t outcome_count() const { return outcome_count_; }
  std::size_t outcome_index(const Assignment& a) const;

  /// Events ordered so that every event follows all of its predecessors;
  /// ties broken by id.
  std::vector<std::size_t> topological_order() const;

 private:
  std::size_t radix_index(const Assignment& a, const std::vector<std::size_t>& which) const;

  std::vector<Event> events_;
  std::map<std::string, std::size_t> by_id_;
  CausalStructure causal_;
  std::vector<std::size_t> settings_, outcomes_, noises_;
  std::vector<std::size_t> strides_;
  std::size_t assignment_count_ = 1, input_count_ = 1, outcome_count_ = 1;
};

/// Rule choosing one setting: a conditional distribution over its domain given
/// the values of `parents`. A constant rule has no parents and a point mass.
struct SettingRule {
  std::vector<std::size_t> parents;
  /// One row per mixed-radix assignment of the parents (first parent fastest).
  std::vector<std::vector<double>> table;

  static SettingRule constant(int value, std::size_t domain_size);
  bool is_constant() const;
};

/// Setting event index -> rule. Every setting must have a rule.
using Strategy = std::map<std::size_t, SettingRule>;

struct Behavior {
  /// Per noise event, in EventSystem::noises() order.
  std::vector<std::vector<double>> noise_priors;
  /// wp(o | z, lambda): row per input_index, column per outcome_index.
  std::vector<std::vector<double>> outcome_table;

  /// Fills the outcome table from wp(outcome assignment | input assignment).
  /// The callback receives a full assignment with settings, noises and
  /// outcomes populated.
  static Behavior tabulate(const EventSystem& system, std::vector<std::vector<double>> noise_priors,
                           const std::function<double(const Assignment&)>& wp);
};

struct Scenario {
  EventSystem system;
  Behavior behavior;
  Strategy strategy;
};

/// Checks table shapes, normalization (1e-12), value ranges and the causal
/// consistency of every strategy rule. Throws InputError or CausalViolation.
void validate(const Scenario& scenario);
void validate_strategy(const EventSystem& system, const Strategy& strategy);

}  // namespace cfq::discrete
