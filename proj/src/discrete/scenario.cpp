#include "cfq/discrete/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "cfq/error.hpp"

namespace cfq::discrete {

namespace {

constexpr double kTableTolerance = 1e-12;

void check_distribution(const std::vector<double>& row, std::size_t expected_size, const std::string& what) {
  if (row.size() != expected_size) {
    throw InputError(what + ": expected " + std::to_string(expected_size) + " entries, got " +
                     std::to_string(row.size()));
  }
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(what + ": entry outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > kTableTolerance) {
    throw InputError(what + ": sums to " + std::to_string(total) + ", not 1");
  }
}

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::setting:
      return "setting";
    case EventKind::outcome:
      return "outcome";
    case EventKind::noise:
      return "noise";
  }
  return "?";
}

EventKind parse_event_kind(const std::string& text) {
  if (text == "setting") return EventKind::setting;
  if (text == "outcome") return EventKind::outcome;
  if (text == "noise") return EventKind::noise;
  throw InputError("unknown event kind '" + text + "'");
}

CausalStructure::CausalStructure(std::size_t n_events, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : n_(n_events), closure_(n_events * n_events, 0) {
  for (const auto& [from, to] : edges) {
    if (from >= n_ || to >= n_) throw InputError("precedence edge refers to an unknown event");
    closure_[from * n_ + to] = 1;
  }
  // Warshall
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      if (closure_[i * n_ + k])
        for (std::size_t j = 0; j < n_; ++j)
          if (closure_[k * n_ + j]) closure_[i * n_ + j] = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    if (closure_[i * n_ + i]) throw InputError("causal structure contains a cycle");
  }
}

EventSystem::EventSystem(std::vector<Event> events, const std::vector<std::pair<std::string, std::string>>& precedes)
    : events_(std::move(events)) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    if (e.id.empty()) throw InputError("event with empty id");
    if (e.domain.empty()) throw InputError("event '" + e.id + "' has an empty domain");
    std::set<std::string> unique(e.domain.begin(), e.domain.end());
    if (unique.size() != e.domain.size()) throw InputError("event '" + e.id + "' has duplicate domain values");
    if (!by_id_.emplace(e.id, i).second) throw InputError("duplicate event id '" + e.id + "'");
    switch (e.kind) {
      case EventKind::setting:
        settings_.push_back(i);
        break;
      case EventKind::outcome:
        outcomes_.push_back(i);
        break;
      case EventKind::noise:
        noises_.push_back(i);
        break;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(precedes.size());
  for (const auto& [from, to] : precedes) edges.emplace_back(index_of(from), index_of(to));
  causal_ = CausalStructure(events_.size(), edges);

  for (std::size_t i : outcomes_) {
    const auto& s = events_[i].setting;
    if (!s) continue;
    const std::size_t si = index_of(*s);
    if (events_[si].kind != EventKind::setting) {
      throw InputError("outcome '" + events_[i].id + "' names a non-setting '" + *s + "'");
    }
    if (!causal_.precedes(si, i)) {
      throw InputError("outcome '" + events_[i].id + "' is not preceded by its setting '" + *s + "'");
    }
  }

  strides_.resize(events_.size());
  for (std::size_t i = 0; i < events_.size(); ++i) {
    strides_[i] = assignment_count_;
    assignment_count_ *= events_[i].domain.size();
  }
  for (std::size_t i : settings_) input_count_ *= events_[i].domain.size();
  for (std::size_t i : noises_) input_count_ *= events_[i].domain.size();
  for (std::size_t i : outcomes_) outcome_count_ *= events_[i].domain.size();
}

std::size_t EventSystem::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw InputError("unknown event id '" + id + "'");
  return it->second;
}

int EventSystem::value_index(std::size_t event, const std::string& value) const {
  const auto& dom = events_.at(event).domain;
  auto it = std::find(dom.begin(), dom.end(), value);
  if (it == dom.end()) {
    throw InputError("value '" + value + "' is not in the domain of '" + events_[event].id + "'");
  }
  return static_cast<int>(it - dom.begin());
}

Assignment EventSystem::decode(std::size_t full_index) const {
  Assignment a(events_.size());
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const std::size_t d = events_[i].domain.size();
    a[i] = static_cast<int>(full_index % d);
    full_index /= d;
  }
  return a;
}

std::size_t EventSystem::encode(const Assignment& a) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < events_.size(); ++i) idx += strides_[i] * static_cast<std::size_t>(a[i]);
  return idx;
}

std::size_t EventSystem::radix_index(const Assignment& a, const std::vector<std::size_t>& which) const {
  std::size_t idx = 0, stride = 1;
  for (std::size_t e : which) {
    idx += stride * static_cast<std::size_t>(a[e]);
    stride *= events_[e].domain.size();
  }
  return idx;
}

std::size_t EventSystem::input_index(const Assignment& a) const {
  std::size_t idx = radix_index(a, settings_);
  std::size_t stride = 1;
  for (std::size_t i : settings_) stride *= events_[i].domain.size();
  return idx + stride * radix_index(a, noises_);
}

std::size_t EventSystem::outcome_index(const Assignment& a) const { return radix_index(a, outcomes_); }

std::vector<std::size_t> EventSystem::topological_order() const {
  const std::size_t n = events_.size();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (causal_.precedes(i, j)) ++indegree[j];
  auto by_id = [this](std::size_t a, std::size_t b) { return events_[a].id > events_[b].id; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
      if (causal_.precedes(i, j) && --indegree[j] == 0) ready.push(j);
  }
  return order;
}

SettingRule SettingRule::constant(int value, std::size_t domain_size) {
  SettingRule rule;
  rule.table.assign(1, std::vector<double>(domain_size, 0.0));
  rule.table[0].at(static_cast<std::size_t>(value)) = 1.0;
  return rule;
}

bool SettingRule::is_constant() const {
  if (!parents.empty() || table.size() != 1) return false;
  return std::count(table[0].begin(), table[0].end(), 1.0) == 1;
}

Behavior Behavior::tabulate(const EventSystem& system, std::vector<std::vector<double>> noise_priors,
                            const std::function<double(const Assignment&)>& wp) {
  Behavior b;
  b.noise_priors = std::move(noise_priors);
  b.outcome_table.assign(system.input_count(), std::vector<double>(system.outcome_count(), 0.0));
  for (std::size_t k = 0; k < system.assignment_count(); ++k) {
    const Assignment a = system.decode(k);
    b.outcome_table[system.input_index(a)][system.outcome_index(a)] = wp(a);
  }
  return b;
}

void validate_strategy(const EventSystem& system, const Strategy& strategy) {
  for (std::size_t s : system.settings()) {
    if (!strategy.count(s)) throw InputError("no strategy rule for setting '" + system.event(s).id + "'");
  }
  for (const auto& [setting, rule] : strategy) {
    if (setting >= system.size() || system.event(setting).kind != EventKind::setting) {
      throw InputError("strategy rule attached to a non-setting event");
    }
    const std::string& name = system.event(setting).id;
    std::size_t rows = 1;
    for (std::size_t p : rule.parents) {
      if (p >= system.size()) throw InputError("strategy for '" + name + "' reads an unknown event");
      if (!system.causal().precedes(p, setting)) {
        throw CausalViolation("strategy for '" + name + "' reads '" + system.event(p).id +
                              "', which does not precede it");
      }
      rows *= system.event(p).domain.size();
    }
    if (rule.table.size() != rows) {
      throw InputError("strategy for '" + name + "' has " + std::to_string(rule.table.size()) + " rows, expected " +
                       std::to_string(rows));
    }
    for (const auto& row : rule.table) {
      check_distribution(row, system.event(setting).domain.size(), "strategy for '" + name + "'");
    }
  }
}

void validate(const Scenario& scenario) {
  const EventSystem& sys = scenario.system;
  const Behavior& b = scenario.behavior;
  if (b.noise_priors.size() != sys.noises().size()) throw InputError("noise prior count does not match noise events");
  for (std::size_t k = 0; k < sys.noises().size(); ++k) {
    const Event& e = sys.event(sys.noises()[k]);
    check_distribution(b.noise_priors[k], e.domain.size(), "prior of '" + e.id + "'");
  }
  if (b.outcome_table.size() != sys.input_count()) {
    throw InputError("behavior table does not cover every setting/noise combination");
  }
  for (const auto& row : b.outcome_table) check_distribution(row, sys.outcome_count(), "behavior row");
  validate_strategy(sys, scenario.strategy);
}

}  // namespace cfq::discrete
