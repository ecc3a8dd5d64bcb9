#include "cfq/discrete/chsh.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace cfq::discrete {

namespace {

std::string angle_label(double angle) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", angle);
  return buf;
}

}  // namespace

double singlet_probability(int a, int b, double phi) { return 0.25 * (1.0 - a * b * std::cos(phi)); }

ChshProblem chsh_scenario(double alice_angle, double bob_angle, double alice_cf_angle) {
  std::vector<double> alice_angles{alice_angle};
  if (alice_cf_angle != alice_angle) alice_angles.push_back(alice_cf_angle);

  std::vector<std::string> alice_domain;
  for (double a : alice_angles) alice_domain.push_back(angle_label(a));
  const std::vector<std::string> outcomes{"+1", "-1"};

  std::vector<Event> events{
      {"X", EventKind::setting, alice_domain, std::nullopt},
      {"A", EventKind::outcome, outcomes, std::string("X")},
      {"Y", EventKind::setting, {angle_label(bob_angle)}, std::nullopt},
      {"B", EventKind::outcome, outcomes, std::string("Y")},
  };
  EventSystem system(std::move(events), {{"X", "A"}, {"Y", "B"}});
  const std::size_t X = 0, A = 1, Y = 2, B = 3;

  auto sign = [](int value_index) { return value_index == 0 ? +1 : -1; };
  Behavior behavior = Behavior::tabulate(system, {}, [&](const Assignment& v) {
    const double phi = alice_angles[static_cast<std::size_t>(v[X])] - bob_angle;
    return singlet_probability(sign(v[A]), sign(v[B]), phi);
  });

  Strategy strategy;
  strategy[X] = SettingRule::constant(0, alice_angles.size());
  strategy[Y] = SettingRule::constant(0, 1);

  Query query;
  query.evidence = {{X, 0}, {A, 0}, {Y, 0}};
  query.antecedent = {{X, static_cast<int>(alice_angles.size() - 1)}};
  query.consequent = {{A, 0}};

  ChshProblem problem{Scenario{std::move(system), std::move(behavior), std::move(strategy)}, std::move(query)};
  return problem;
}

}  // namespace cfq::discrete
