#pragma once

#include "cfq/discrete/calculus.hpp"
#include "cfq/discrete/scenario.hpp"

namespace cfq::discrete {

/// Singlet statistics for outcomes a, b in {+1, -1} measured along
/// Bloch-sphere directions separated by `phi`: (1 - a b cos phi) / 4.
double singlet_probability(int a, int b, double phi);

struct ChshProblem {
  Scenario scenario;
  Query query;
};

/// Alice (X, A) and Bob (Y, B) share a singlet; settings are Bloch angles on
/// one great circle. The query asks Su(A' = +1 | X' = alice_cf || X, A = +1, Y).
/// Outcome labels are "+1" and "-1"; setting labels are the angles.
ChshProblem chsh_scenario(double alice_angle, double bob_angle, double alice_cf_angle);

}  // namespace cfq::discrete
