#include "cfq/discrete/calculus.hpp"

#include <string>

#include "cfq/error.hpp"

namespace cfq::discrete {

namespace {

bool matches(const Assignment& a, const PartialAssignment& partial) {
  for (const auto& [event, value] : partial)
    if (a[event] != value) return false;
  return true;
}

std::size_t rule_row(const SettingRule& rule, const EventSystem& system, const Assignment& a) {
  std::size_t row = 0, stride = 1;
  for (std::size_t p : rule.parents) {
    row += stride * static_cast<std::size_t>(a[p]);
    stride *= system.event(p).domain.size();
  }
  return row;
}

void check_values(const EventSystem& system, const PartialAssignment& partial, const char* what) {
  for (const auto& [event, value] : partial) {
    if (event >= system.size()) throw QueryError(std::string(what) + " refers to an unknown event");
    if (value < 0 || static_cast<std::size_t>(value) >= system.event(event).domain.size()) {
      throw QueryError(std::string(what) + " value out of the domain of '" + system.event(event).id + "'");
    }
  }
}

}  // namespace

double JointDistribution::total() const {
  double s = 0.0;
  for (double p : p_) s += p;
  return s;
}

double JointDistribution::probability(const PartialAssignment& partial) const {
  double s = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (p_[k] == 0.0) continue;
    if (matches(system_->decode(k), partial)) s += p_[k];
  }
  return s;
}

double JointDistribution::conditional(const PartialAssignment& target, const PartialAssignment& given) const {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (p_[k] == 0.0) continue;
    const Assignment a = system_->decode(k);
    if (!matches(a, given)) continue;
    den += p_[k];
    if (matches(a, target)) num += p_[k];
  }
  if (den <= 0.0) throw NullConditioning("conditioning on an event of zero probability");
  return num / den;
}

std::set<std::size_t> inclusive_descendants(const EventSystem& system, const std::set<std::size_t>& antecedent) {
  for (std::size_t a : antecedent) {
    if (a >= system.size()) throw InputError("antecedent refers to an unknown event");
    if (system.event(a).kind != EventKind::setting) {
      throw InputError("antecedent '" + system.event(a).id + "' is not a setting");
    }
  }
  std::set<std::size_t> out(antecedent.begin(), antecedent.end());
  for (std::size_t a : antecedent)
    for (std::size_t j = 0; j < system.size(); ++j)
      if (system.causal().precedes(a, j)) out.insert(j);
  return out;
}

std::set<std::size_t> fixtures(const EventSystem& system, const std::set<std::size_t>& antecedent) {
  const auto d = inclusive_descendants(system, antecedent);
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < system.size(); ++i)
    if (!d.count(i)) out.insert(i);
  return out;
}

JointDistribution joint_distribution(const Scenario& scenario, const Strategy& strategy) {
  const EventSystem& sys = scenario.system;
  validate_strategy(sys, strategy);
  std::vector<double> p(sys.assignment_count(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Assignment a = sys.decode(k);
    double w = 1.0;
    for (std::size_t n = 0; n < sys.noises().size() && w > 0.0; ++n) {
      w *= scenario.behavior.noise_priors[n][static_cast<std::size_t>(a[sys.noises()[n]])];
    }
    for (const auto& [setting, rule] : strategy) {
      if (w == 0.0) break;
      w *= rule.table[rule_row(rule, sys, a)][static_cast<std::size_t>(a[setting])];
    }
    if (w > 0.0) w *= scenario.behavior.outcome_table[sys.input_index(a)][sys.outcome_index(a)];
    p[k] = w;
  }
  return JointDistribution(sys, std::move(p));
}

Strategy counterfactual_strategy(const Scenario& scenario, const PartialAssignment& antecedent) {
  Strategy s = scenario.strategy;
  for (const auto& [setting, value] : antecedent) {
    s[setting] = SettingRule::constant(value, scenario.system.event(setting).domain.size());
  }
  return s;
}

void validate_query(const EventSystem& system, const Query& query) {
  check_values(system, query.evidence, "evidence");
  check_values(system, query.antecedent, "antecedent");
  check_values(system, query.consequent, "consequent");
  for (const auto& [event, value] : query.evidence) {
    if (system.event(event).kind == EventKind::noise) {
      throw QueryError("evidence may only contain settings and outcomes, not '" + system.event(event).id + "'");
    }
  }
  std::set<std::size_t> antecedent;
  for (const auto& [event, value] : query.antecedent) {
    if (system.event(event).kind != EventKind::setting) {
      throw QueryError("antecedent '" + system.event(event).id + "' is not a setting");
    }
    antecedent.insert(event);
  }
  const auto d = inclusive_descendants(system, antecedent);
  for (const auto& [event, value] : query.consequent) {
    if (!d.count(event)) {
      throw QueryError("consequent '" + system.event(event).id + "' is not a descendant of the antecedent");
    }
  }
}

SupposabilityResult supposability(const Scenario& scenario, const Query& query) {
  const EventSystem& sys = scenario.system;
  validate_query(sys, query);

  std::set<std::size_t> antecedent;
  for (const auto& kv : query.antecedent) antecedent.insert(kv.first);
  const std::set<std::size_t> fixed = fixtures(sys, antecedent);
  const std::vector<std::size_t> fixed_list(fixed.begin(), fixed.end());

  std::size_t n_fixture_values = 1;
  for (std::size_t f : fixed_list) n_fixture_values *= sys.event(f).domain.size();
  auto fixture_key = [&](const Assignment& a) {
    std::size_t key = 0, stride = 1;
    for (std::size_t f : fixed_list) {
      key += stride * static_cast<std::size_t>(a[f]);
      stride *= sys.event(f).domain.size();
    }
    return key;
  };

  const JointDistribution actual = joint_distribution(scenario, scenario.strategy);
  const JointDistribution counter = joint_distribution(scenario, counterfactual_strategy(scenario, query.antecedent));

  std::vector<double> posterior(n_fixture_values, 0.0), cf_den(n_fixture_values, 0.0), cf_num(n_fixture_values, 0.0);
  std::vector<PartialAssignment> fixture_value(n_fixture_values);
  double evidence_mass = 0.0;
  for (std::size_t k = 0; k < sys.assignment_count(); ++k) {
    const double pa = actual.probabilities()[k];
    const double pc = counter.probabilities()[k];
    if (pa == 0.0 && pc == 0.0) continue;
    const Assignment a = sys.decode(k);
    const std::size_t key = fixture_key(a);
    if (fixture_value[key].size() != fixed_list.size()) {
      for (std::size_t f : fixed_list) fixture_value[key][f] = a[f];
    }
    if (pa > 0.0 && matches(a, query.evidence)) {
      posterior[key] += pa;
      evidence_mass += pa;
    }
    if (pc > 0.0 && matches(a, query.antecedent)) {
      cf_den[key] += pc;
      if (matches(a, query.consequent)) cf_num[key] += pc;
    }
  }
  if (evidence_mass <= 0.0) throw NullConditioning("the evidence has zero probability under the actual strategy");

  SupposabilityResult result;
  for (std::size_t key = 0; key < n_fixture_values; ++key) {
    if (posterior[key] <= 0.0) continue;
    if (cf_den[key] <= 0.0) {
      throw NullConditioning("a fixture value with positive posterior is impossible in the counterfactual world");
    }
    FixtureTerm term{fixture_value[key], posterior[key] / evidence_mass, cf_num[key] / cf_den[key]};
    result.value += term.posterior * term.counterfactual;
    result.terms.push_back(std::move(term));
  }
  return result;
}

}  // namespace cfq::discrete
