#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "cfq/discrete/calculus.hpp"
#include "cfq/discrete/chsh.hpp"
#include "cfq/discrete/json_io.hpp"
#include "cfq/discrete/scenario.hpp"
#include "cfq/error.hpp"

using namespace cfq;
using namespace cfq::discrete;

namespace {

constexpr double kPi = std::numbers::pi;

std::set<std::string> ids(const EventSystem& sys, const std::set<std::size_t>& idx) {
  std::set<std::string> out;
  for (std::size_t i : idx) out.insert(sys.event(i).id);
  return out;
}

Event setting(std::string id, std::size_t n) {
  std::vector<std::string> dom;
  for (std::size_t k = 0; k < n; ++k) dom.push_back(std::to_string(k));
  return {std::move(id), EventKind::setting, dom, std::nullopt};
}

Event outcome(std::string id, std::string setting_id, std::size_t n) {
  std::vector<std::string> dom;
  for (std::size_t k = 0; k < n; ++k) dom.push_back(std::to_string(k));
  return {std::move(id), EventKind::outcome, dom, std::move(setting_id)};
}

Event noise(std::string id, std::size_t n) {
  std::vector<std::string> dom;
  for (std::size_t k = 0; k < n; ++k) dom.push_back(std::to_string(k));
  return {std::move(id), EventKind::noise, dom, std::nullopt};
}

std::vector<double> random_dist(std::mt19937_64& g, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> d(n);
  double s = 0.0;
  for (auto& x : d) s += (x = u(g));
  for (auto& x : d) x /= s;
  return d;
}

// Two-party scenario with a binary noise L feeding both outcomes, O1 -> O2
// signalling, and optionally an adaptive second setting S2 that reads O1.
struct RandomModel {
  bool adaptive = false;
  std::array<double, 2> p_l{};
  std::array<double, 2> p_s1{};
  std::array<std::array<double, 2>, 2> p_s2{};                // [o1][s2] (row 0 used when not adaptive)
  std::array<std::array<std::array<double, 2>, 2>, 2> p_o1{};  // [s1][l][o1]
  std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> p_o2{};  // [s2][l][o1][o2]

  static RandomModel draw(std::mt19937_64& g, bool adaptive) {
    RandomModel m;
    m.adaptive = adaptive;
    auto fill = [&](std::array<double, 2>& a) {
      const auto d = random_dist(g, 2);
      a = {d[0], d[1]};
    };
    fill(m.p_l);
    fill(m.p_s1);
    for (auto& r : m.p_s2) fill(r);
    for (auto& a : m.p_o1)
      for (auto& b : a) fill(b);
    for (auto& a : m.p_o2)
      for (auto& b : a)
        for (auto& c : b) fill(c);
    return m;
  }

  // Independent joint probability over (l, s1, o1, s2, o2) with s1 optionally forced.
  double joint(int l, int s1, int o1, int s2, int o2, int forced_s1) const {
    const double ps1 = forced_s1 < 0 ? p_s1[s1] : (s1 == forced_s1 ? 1.0 : 0.0);
    const double ps2 = adaptive ? p_s2[o1][s2] : p_s2[0][s2];
    return p_l[l] * ps1 * p_o1[s1][l][o1] * ps2 * p_o2[s2][l][o1][o2];
  }

  // Events listed in `order` (a permutation of L S1 O1 S2 O2) with id prefix.
  Scenario build(const std::array<int, 5>& order, const std::string& prefix) const {
    const std::string L = prefix + "L", S1 = prefix + "S1", O1 = prefix + "O1", S2 = prefix + "S2", O2 = prefix + "O2";
    const std::array<Event, 5> canonical{noise(L, 2), setting(S1, 2), outcome(O1, S1, 2), setting(S2, 2),
                                         outcome(O2, S2, 2)};
    std::vector<Event> events;
    for (int k : order) events.push_back(canonical[static_cast<std::size_t>(k)]);
    std::vector<std::pair<std::string, std::string>> edges{{L, O1}, {L, O2}, {S1, O1}, {S2, O2}, {O1, O2}};
    if (adaptive) edges.emplace_back(O1, S2);
    EventSystem sys(std::move(events), edges);
    const std::size_t il = sys.index_of(L), is1 = sys.index_of(S1), io1 = sys.index_of(O1), is2 = sys.index_of(S2),
                      io2 = sys.index_of(O2);
    std::vector<std::vector<double>> priors{{p_l[0], p_l[1]}};
    Behavior beh = Behavior::tabulate(sys, priors, [&](const Assignment& a) {
      return p_o1[a[is1]][a[il]][a[io1]] * p_o2[a[is2]][a[il]][a[io1]][a[io2]];
    });
    Strategy st;
    st[is1] = SettingRule{{}, {{p_s1[0], p_s1[1]}}};
    if (adaptive) {
      st[is2] = SettingRule{{io1}, {{p_s2[0][0], p_s2[0][1]}, {p_s2[1][0], p_s2[1][1]}}};
    } else {
      st[is2] = SettingRule{{}, {{p_s2[0][0], p_s2[0][1]}}};
    }
    return Scenario{std::move(sys), std::move(beh), std::move(st)};
  }
};

// Variables in canonical order L S1 O1 S2 O2; -1 means unconstrained.
using Pattern = std::array<int, 5>;

bool matches(const Pattern& pat, const std::array<int, 5>& v) {
  for (int k = 0; k < 5; ++k) {
    if (pat[static_cast<std::size_t>(k)] >= 0 && pat[static_cast<std::size_t>(k)] != v[static_cast<std::size_t>(k)]) {
      return false;
    }
  }
  return true;
}

// Brute-force oracle for antecedent S1 = a.
double oracle_supposability(const RandomModel& m, const Pattern& evidence, int a, const Pattern& consequent) {
  // Fixtures: everything that S1 does not reach.
  const std::vector<int> fixture_vars = m.adaptive ? std::vector<int>{0} : std::vector<int>{0, 3};
  auto fixture_of = [&](const std::array<int, 5>& v) {
    Pattern f{-1, -1, -1, -1, -1};
    for (int k : fixture_vars) f[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k)];
    return f;
  };
  auto sum = [&](const Pattern& pat, int forced) {
    double s = 0.0;
    for (int l = 0; l < 2; ++l)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int o1 = 0; o1 < 2; ++o1)
          for (int s2 = 0; s2 < 2; ++s2)
            for (int o2 = 0; o2 < 2; ++o2)
              if (matches(pat, {l, s1, o1, s2, o2})) s += m.joint(l, s1, o1, s2, o2, forced);
    return s;
  };
  const double pe = sum(evidence, -1);
  std::set<Pattern> seen;
  double su = 0.0;
  for (int l = 0; l < 2; ++l)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int o1 = 0; o1 < 2; ++o1)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int o2 = 0; o2 < 2; ++o2) {
            const Pattern f = fixture_of({l, s1, o1, s2, o2});
            if (!seen.insert(f).second) continue;
            Pattern fe = evidence;
            bool consistent = true;
            for (int k : fixture_vars) {
              auto& slot = fe[static_cast<std::size_t>(k)];
              if (slot >= 0 && slot != f[static_cast<std::size_t>(k)]) consistent = false;
              slot = f[static_cast<std::size_t>(k)];
            }
            if (!consistent) continue;
            const double posterior = sum(fe, -1) / pe;
            if (posterior == 0.0) continue;
            Pattern fc = f;
            for (int k = 0; k < 5; ++k) {
              if (consequent[static_cast<std::size_t>(k)] >= 0) fc[static_cast<std::size_t>(k)] = consequent[static_cast<std::size_t>(k)];
            }
            su += posterior * sum(fc, a) / sum(f, a);
          }
  return su;
}

PartialAssignment to_partial(const Scenario& s, const Pattern& pat, const std::string& prefix) {
  static const std::array<std::string, 5> names{"L", "S1", "O1", "S2", "O2"};
  PartialAssignment out;
  for (std::size_t k = 0; k < 5; ++k) {
    if (pat[k] >= 0) out[s.system.index_of(prefix + names[k])] = pat[k];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- structure

TEST(CausalStructure, ChshDescendantsOfAliceSetting) {
  const auto chsh = chsh_scenario(0.0, kPi / 4, kPi / 2);
  const auto& sys = chsh.scenario.system;
  EXPECT_EQ(ids(sys, inclusive_descendants(sys, {sys.index_of("X")})), (std::set<std::string>{"X", "A"}));
  EXPECT_EQ(ids(sys, fixtures(sys, {sys.index_of("X")})), (std::set<std::string>{"Y", "B"}));
}

TEST(CausalStructure, EmptyAntecedentHasNoDescendants) {
  const auto chsh = chsh_scenario(0.0, kPi / 4, kPi / 2);
  EXPECT_TRUE(inclusive_descendants(chsh.scenario.system, {}).empty());
  EXPECT_EQ(fixtures(chsh.scenario.system, {}).size(), 4u);
}

TEST(CausalStructure, ChainIsTransitivelyClosed) {
  EventSystem sys({setting("X", 2), outcome("A", "X", 2), outcome("B", "X", 2)}, {{"X", "A"}, {"A", "B"}});
  EXPECT_TRUE(sys.causal().precedes(0, 2));
  EXPECT_EQ(ids(sys, inclusive_descendants(sys, {0})), (std::set<std::string>{"X", "A", "B"}));
}

TEST(CausalStructure, FullyConnectedSettingsLeaveOnlyNoise) {
  EventSystem sys({noise("L", 2), setting("S1", 2), setting("S2", 2), outcome("O", "S2", 2)},
                  {{"S1", "S2"}, {"S1", "O"}, {"S2", "O"}, {"L", "O"}});
  EXPECT_EQ(ids(sys, fixtures(sys, {1, 2})), (std::set<std::string>{"L"}));
}

TEST(CausalStructure, ClosureMatchesDepthFirstOracleOnRandomDags) {
  std::mt19937_64 g(20240611);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5;
    std::vector<Event> events;
    for (std::size_t i = 0; i < n; ++i) events.push_back(setting("e" + std::to_string(i), 2));
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::vector<std::size_t>> adj(n);
    std::bernoulli_distribution coin(0.35);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (coin(g)) {
          edges.emplace_back("e" + std::to_string(i), "e" + std::to_string(j));
          adj[i].push_back(j);
        }
    EventSystem sys(events, edges);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<char> seen(n, 0);
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : adj[u])
          if (!seen[v]) {
            seen[v] = 1;
            stack.push_back(v);
          }
      }
      for (std::size_t t = 0; t < n; ++t) EXPECT_EQ(sys.causal().precedes(s, t), seen[t] != 0);
      // Fixtures and descendants partition the events.
      const auto d = inclusive_descendants(sys, {s});
      const auto f = fixtures(sys, {s});
      EXPECT_EQ(d.size() + f.size(), n);
      for (std::size_t i : d) EXPECT_EQ(f.count(i), 0u);
      for (std::size_t t = 0; t < n; ++t) EXPECT_EQ(d.count(t) == 1, t == s || seen[t] != 0);
    }
  }
}

TEST(CausalStructure, RejectsCyclesAndUnknownIds) {
  EXPECT_THROW(EventSystem({setting("X", 2), setting("Y", 2)}, {{"X", "Y"}, {"Y", "X"}}), InputError);
  EXPECT_THROW(EventSystem({setting("X", 2)}, {{"X", "Q"}}), InputError);
  EXPECT_THROW(EventSystem({setting("X", 2), setting("X", 2)}, {}), InputError);
  EXPECT_THROW(EventSystem({{"X", EventKind::setting, {}, std::nullopt}}, {}), InputError);
  // An outcome must follow its own setting.
  EXPECT_THROW(EventSystem({setting("X", 2), outcome("A", "X", 2)}, {}), InputError);
  const auto chsh = chsh_scenario(0.0, kPi / 4, kPi / 2);
  EXPECT_THROW(inclusive_descendants(chsh.scenario.system, {17}), InputError);
  EXPECT_THROW(fixtures(chsh.scenario.system, {1}), InputError);  // A is an outcome
}

// ------------------------------------------------------------- distributions

TEST(JointDistribution, ChshConstantSettingsGiveSingletTable) {
  const auto chsh = chsh_scenario(0.0, kPi / 4, 0.0);
  const auto joint = joint_distribution(chsh.scenario, chsh.scenario.strategy);
  EXPECT_NEAR(joint.total(), 1.0, 1e-12);
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      const int sa = a == 0 ? 1 : -1, sb = b == 0 ? 1 : -1;
      const double expected = 0.25 * (1.0 - sa * sb * std::cos(kPi / 4));
      EXPECT_NEAR(joint.probability({{1, a}, {3, b}}), expected, 1e-15);
    }
}

TEST(JointDistribution, DeterministicSingleEventIsPointMass) {
  EventSystem sys({setting("X", 3)}, {});
  Behavior beh = Behavior::tabulate(sys, {}, [](const Assignment&) { return 1.0; });
  Strategy st;
  st[0] = SettingRule::constant(2, 3);
  Scenario s{sys, beh, st};
  const auto joint = joint_distribution(s, s.strategy);
  EXPECT_EQ(joint.probabilities(), (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(JointDistribution, NoiseFedOutcomeMatchesHandEnumeration) {
  // L ~ (0.3, 0.7); O copies L with probability 0.9 when X = 0 and flips it when X = 1.
  EventSystem sys({noise("L", 2), setting("X", 2), outcome("O", "X", 2)}, {{"L", "O"}, {"X", "O"}});
  Behavior beh = Behavior::tabulate(sys, {{0.3, 0.7}}, [](const Assignment& a) {
    const int target = a[1] == 0 ? a[0] : 1 - a[0];
    return a[2] == target ? 0.9 : 0.1;
  });
  Strategy st;
  st[1] = SettingRule{{}, {{0.25, 0.75}}};
  Scenario s{sys, beh, st};
  const auto joint = joint_distribution(s, s.strategy);
  for (int l = 0; l < 2; ++l)
    for (int x = 0; x < 2; ++x)
      for (int o = 0; o < 2; ++o) {
        const double pl = l == 0 ? 0.3 : 0.7, px = x == 0 ? 0.25 : 0.75;
        const int target = x == 0 ? l : 1 - l;
        const double po = o == target ? 0.9 : 0.1;
        EXPECT_NEAR(joint.probability({{0, l}, {1, x}, {2, o}}), pl * px * po, 1e-15);
      }
  EXPECT_NEAR(joint.total(), 1.0, 1e-12);
}

TEST(JointDistribution, RuleReadingLaterEventIsCausalViolation) {
  EventSystem sys({setting("X", 2), outcome("A", "X", 2), setting("Y", 2)}, {{"X", "A"}});
  Behavior beh = Behavior::tabulate(sys, {}, [](const Assignment&) { return 0.5; });
  Strategy st;
  st[0] = SettingRule::constant(0, 2);
  st[2] = SettingRule{{1}, {{1.0, 0.0}, {0.0, 1.0}}};  // Y reads A, but A does not precede Y
  Scenario s{sys, beh, st};
  EXPECT_THROW(validate(s), CausalViolation);
  EXPECT_THROW(joint_distribution(s, st), CausalViolation);
}

TEST(Behavior, RejectsUnnormalizedTables) {
  EventSystem sys({setting("X", 2), outcome("A", "X", 2)}, {{"X", "A"}});
  Behavior beh = Behavior::tabulate(sys, {}, [](const Assignment&) { return 0.6; });
  Strategy st;
  st[0] = SettingRule::constant(0, 2);
  EXPECT_THROW(validate(Scenario{sys, beh, st}), InputError);
}

// -------------------------------------------------------------- supposability

TEST(Supposability, ChshWorkedExampleIsThreeQuarters) {
  const auto chsh = chsh_scenario(0.0, kPi / 4, kPi / 2);
  const auto r = supposability(chsh.scenario, chsh.query);
  EXPECT_NEAR(r.value, 0.75, 1e-12);
  // Two fixture values (Bob's outcomes); each factor is (sqrt2 +- 1) / (2 sqrt2).
  ASSERT_EQ(r.terms.size(), 2u);
  const double hi = (std::sqrt(2.0) + 1.0) / (2.0 * std::sqrt(2.0));
  const double lo = (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(2.0));
  for (const auto& t : r.terms) {
    const int b = t.fixture.at(3);
    // Bob's "-1" is the outcome anti-aligned with Alice's +1 along his axis.
    EXPECT_NEAR(t.posterior, b == 1 ? hi : lo, 1e-12);
    EXPECT_NEAR(t.counterfactual, b == 1 ? hi : lo, 1e-12);
  }
  EXPECT_NEAR(hi * hi + lo * lo, 0.75, 1e-15);
}

TEST(Supposability, IdenticalBasesGiveCertainty) {
  const auto chsh = chsh_scenario(0.0, 0.0, 0.0);
  EXPECT_NEAR(supposability(chsh.scenario, chsh.query).value, 1.0, 1e-12);
  const auto joint = joint_distribution(chsh.scenario, chsh.scenario.strategy);
  EXPECT_NEAR(joint.conditional({{3, 1}}, {{1, 0}}), 1.0, 1e-15);
}

TEST(Supposability, ChshAnglesMatchClosedFormDoubleSum) {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 40; ++trial) {
    const double x = angle(g), y = angle(g), xc = angle(g);
    const auto chsh = chsh_scenario(x, y, xc);
    double expected = 0.0;
    for (int b : {+1, -1}) {
      const double pb = 0.5 * (1.0 - b * std::cos(x - y));        // Pr(B=b | A=+1)
      const double pa = 0.5 * (1.0 - b * std::cos(xc - y));       // Pr(A'=+1 | B=b)
      expected += pb * pa;
    }
    EXPECT_NEAR(supposability(chsh.scenario, chsh.query).value, expected, 1e-12);
  }
}

TEST(Supposability, RandomScenariosMatchBruteForceOracle) {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 60; ++trial) {
    const bool adaptive = trial % 2 == 1;
    const RandomModel m = RandomModel::draw(g, adaptive);
    const Scenario s = m.build({0, 1, 2, 3, 4}, "");
    std::uniform_int_distribution<int> pick(-1, 1);
    Pattern evidence{-1, pick(g), pick(g), pick(g), pick(g)};
    const int a = trial % 3 == 0 ? 0 : 1;
    for (int c = 0; c < 2; ++c) {
      const Pattern consequent{-1, -1, -1, -1, c};
      Query q{to_partial(s, evidence, ""), to_partial(s, {-1, a, -1, -1, -1}, ""), to_partial(s, consequent, "")};
      EXPECT_NEAR(supposability(s, q).value, oracle_supposability(m, evidence, a, consequent), 1e-12);
    }
  }
}

TEST(Supposability, SumsToOneOverConsequentDomain) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomModel m = RandomModel::draw(g, trial % 2 == 0);
    const Scenario s = m.build({0, 1, 2, 3, 4}, "");
    std::uniform_int_distribution<int> pick(-1, 1);
    const Pattern evidence{-1, pick(g), pick(g), pick(g), pick(g)};
    // Joint consequent over (O1', O2'): four values.
    double total = 0.0;
    for (int c1 = 0; c1 < 2; ++c1)
      for (int c2 = 0; c2 < 2; ++c2) {
        Query q{to_partial(s, evidence, ""), to_partial(s, {-1, 1, -1, -1, -1}, ""),
                to_partial(s, {-1, -1, c1, -1, c2}, "")};
        total += supposability(s, q).value;
      }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(Supposability, InvariantUnderRelabelingAndReordering) {
  std::mt19937_64 g(11);
  const std::vector<std::array<int, 5>> orders{{4, 3, 2, 1, 0}, {2, 0, 4, 1, 3}, {1, 3, 0, 4, 2}};
  for (int trial = 0; trial < 20; ++trial) {
    const RandomModel m = RandomModel::draw(g, trial % 2 == 0);
    const Pattern evidence{-1, 0, 1, -1, 0};
    const Pattern antecedent{-1, 1, -1, -1, -1};
    const Pattern consequent{-1, -1, 0, -1, 1};
    const Scenario base = m.build({0, 1, 2, 3, 4}, "");
    const double ref = supposability(base, {to_partial(base, evidence, ""), to_partial(base, antecedent, ""),
                                            to_partial(base, consequent, "")})
                           .value;
    for (const auto& order : orders) {
      const Scenario s = m.build(order, "zz_");
      const double v = supposability(s, {to_partial(s, evidence, "zz_"), to_partial(s, antecedent, "zz_"),
                                         to_partial(s, consequent, "zz_")})
                           .value;
      EXPECT_NEAR(v, ref, 1e-13);
    }
  }
}

TEST(Supposability, ActualAntecedentWithFixtureEvidenceIsOrdinaryConditional) {
  // When the antecedent repeats the actual constant setting and the evidence
  // lies outside the antecedent's future, nothing is resampled.
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 40; ++trial) {
    RandomModel m = RandomModel::draw(g, false);
    const int actual = trial % 2;
    m.p_s1 = actual == 0 ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
    const Scenario s = m.build({0, 1, 2, 3, 4}, "");
    const Pattern evidence{-1, actual, -1, trial % 3 == 0 ? -1 : trial % 3 - 1, -1};
    for (int c = 0; c < 2; ++c) {
      const Pattern consequent{-1, -1, c, -1, -1};
      Query q{to_partial(s, evidence, ""), to_partial(s, {-1, actual, -1, -1, -1}, ""), to_partial(s, consequent, "")};
      const auto joint = joint_distribution(s, s.strategy);
      EXPECT_NEAR(supposability(s, q).value, joint.conditional(q.consequent, q.evidence), 1e-12);
    }
  }
}

TEST(Supposability, ActualAntecedentStillResamplesDescendantEvidence) {
  // Evidence on A (a descendant of X) is not held fixed: with Bob rotated,
  // Su(A' = +1 | X' = X || A = +1) is 3/4, not the conditional probability 1.
  const auto chsh = chsh_scenario(0.0, kPi / 4, 0.0);
  EXPECT_NEAR(supposability(chsh.scenario, chsh.query).value, 0.75, 1e-12);
  const auto joint = joint_distribution(chsh.scenario, chsh.scenario.strategy);
  EXPECT_NEAR(joint.conditional(chsh.query.consequent, chsh.query.evidence), 1.0, 1e-15);
}

TEST(Supposability, ErrorPaths) {
  const auto chsh = chsh_scenario(0.0, 0.0, kPi / 2);
  Query q = chsh.query;
  // B = +1 with A = +1 is impossible for aligned singlet measurements.
  q.evidence[3] = 0;
  EXPECT_THROW(supposability(chsh.scenario, q), NullConditioning);

  q = chsh.query;
  q.consequent = {{3, 0}};  // Bob's outcome is not downstream of Alice's setting
  EXPECT_THROW(supposability(chsh.scenario, q), QueryError);

  q = chsh.query;
  q.antecedent = {{1, 0}};  // an outcome cannot be an antecedent
  EXPECT_THROW(supposability(chsh.scenario, q), QueryError);

  EventSystem sys({noise("L", 2), setting("X", 2), outcome("O", "X", 2)}, {{"L", "O"}, {"X", "O"}});
  Behavior beh = Behavior::tabulate(sys, {{0.5, 0.5}}, [](const Assignment&) { return 0.5; });
  Strategy st;
  st[1] = SettingRule::constant(0, 2);
  Scenario s{sys, beh, st};
  EXPECT_THROW(supposability(s, Query{{{0, 0}}, {{1, 1}}, {{2, 0}}}), QueryError);  // evidence on noise
}

// --------------------------------------------------------------------- JSON

TEST(ScenarioJson, ChshRoundTripPreservesSupposability) {
  const auto chsh = chsh_scenario(0.0, kPi / 4, kPi / 2);
  const auto doc = parse_scenario(to_json(chsh.scenario, chsh.query));
  EXPECT_NEAR(supposability(doc.scenario, doc.query).value, 0.75, 1e-12);
}

TEST(ScenarioJson, AdaptiveStrategyDocument) {
  // S2 copies O1 with probability 0.8; O2 = S2 deterministically. Antecedent S1' = 1
  // makes O1' = 1 certain, so O2' = 1 with probability 0.8.
  const auto doc = parse_scenario(nlohmann::json::parse(R"({
    "events": [
      {"id": "S1", "kind": "setting", "domain": ["0", "1"]},
      {"id": "O1", "kind": "outcome", "domain": ["0", "1"], "setting": "S1"},
      {"id": "S2", "kind": "setting", "domain": ["0", "1"]},
      {"id": "O2", "kind": "outcome", "domain": ["0", "1"], "setting": "S2"}
    ],
    "precedes": [["S1", "O1"], ["O1", "S2"], ["S2", "O2"]],
    "behavior": {"table": [
      {"given": {"S1": "0", "S2": "0"}, "outcomes": [{"values": {"O1": "0", "O2": "0"}, "p": 1.0}]},
      {"given": {"S1": "0", "S2": "1"}, "outcomes": [{"values": {"O1": "0", "O2": "1"}, "p": 1.0}]},
      {"given": {"S1": "1", "S2": "0"}, "outcomes": [{"values": {"O1": "1", "O2": "0"}, "p": 1.0}]},
      {"given": {"S1": "1", "S2": "1"}, "outcomes": [{"values": {"O1": "1", "O2": "1"}, "p": 1.0}]}
    ]},
    "strategy": {
      "S1": {"constant": "0"},
      "S2": {"parents": ["O1"], "table": [
        {"given": {"O1": "0"}, "dist": {"0": 0.8, "1": 0.2}},
        {"given": {"O1": "1"}, "dist": {"0": 0.2, "1": 0.8}}
      ]}
    },
    "query": {"evidence": {"O1": "0"}, "antecedent": {"S1": "1"}, "consequent": {"O2": "1"}}
  })"));
  EXPECT_NEAR(supposability(doc.scenario, doc.query).value, 0.8, 1e-12);
}

TEST(ScenarioJson, MalformedDocumentsAreInputErrors) {
  EXPECT_THROW(parse_scenario(nlohmann::json::parse(R"({"events": 3})")), InputError);
  EXPECT_THROW(parse_scenario(nlohmann::json::parse(R"({"events": [{"id": "X", "kind": "gadget", "domain": ["0"]}],
                                                       "behavior": {"table": []}, "strategy": {}})")),
               InputError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), InputError);
}
