#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "cfq/discrete/scenario.hpp"

namespace cfq::discrete {

/// A counterfactual question: Su(consequent | antecedent || evidence).
/// Antecedent and consequent refer to the primed (counterfactual) copies of
/// the named events.
struct Query {
  PartialAssignment evidence;
  PartialAssignment antecedent;
  PartialAssignment consequent;
};

/// Probability of every full assignment of the event system.
class JointDistribution {
 public:
  JointDistribution(const EventSystem& system, std::vector<double> probabilities)
      : system_(&system), p_(std::move(probabilities)) {}

  const std::vector<double>& probabilities() const { return p_; }
  double total() const;
  /// Marginal probability that every event in `partial` takes its value.
  double probability(const PartialAssignment& partial) const;
  /// Pr(target | given); throws NullConditioning when Pr(given) == 0.
  double conditional(const PartialAssignment& target, const PartialAssignment& given) const;

 private:
  const EventSystem* system_;
  std::vector<double> p_;
};

/// The antecedent settings together with every event they precede.
std::set<std::size_t> inclusive_descendants(const EventSystem& system, const std::set<std::size_t>& antecedent);
/// Complement of inclusive_descendants in Omega.
std::set<std::size_t> fixtures(const EventSystem& system, const std::set<std::size_t>& antecedent);

/// Exact enumeration of prod_l p_l(lambda_l) * prod_j S_j(z_j | parents) * wp(o | z, lambda).
JointDistribution joint_distribution(const Scenario& scenario, const Strategy& strategy);

/// Actual strategy with each antecedent setting replaced by its constant.
Strategy counterfactual_strategy(const Scenario& scenario, const PartialAssignment& antecedent);

/// Throws QueryError when the query does not fit the scenario.
void validate_query(const EventSystem& system, const Query& query);

/// One fixture value f with the two factors it contributes.
struct FixtureTerm {
  PartialAssignment fixture;
  double posterior = 0.0;       ///< Pr_S(F = f | E = e)
  double counterfactual = 0.0;  ///< Pr_S'(C' = c' | A' = a', F = f)
};

struct SupposabilityResult {
  double value = 0.0;
  std::vector<FixtureTerm> terms;  ///< only fixture values with positive posterior
};

/// Sum over fixture values f of Pr_S'(C'=c' | A'=a', F=f) * Pr_S(F=f | E=e).
SupposabilityResult supposability(const Scenario& scenario, const Query& query);

}  // namespace cfq::discrete
