#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cfq/qubit/linear.hpp"
#include "cfq/qubit/operators.hpp"

namespace cfq::smoothing {

using qubit::ClickRecord;
using qubit::SimParams;

struct SuspectationCurve {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> stderr_;
  std::size_t n_records = 0;   ///< records averaged
  std::size_t n_excluded = 0;  ///< records dropped for Tr[E rho] below 1e-12
};

/// Weak value of the Y-homodyne current: 2 Re Tr[E (i sigma_-) rho] / Tr[E rho].
/// Equals Tr[rho sigma_y] / Tr[rho] when E is proportional to the identity.
double homodyne_weak_value(const qubit::QubitOperator& effect, const qubit::QubitOperator& rho);

/// Weak-value series for one Bob record on the grid t = k dt, k a multiple of
/// `stride`. rho is propagated forward from |g><g| and the effect backward from
/// E_T = I with Bob's linear maps while Alice's detector is averaged over
/// (AliceChannel::unmonitored); E_k includes the step starting at t_k.
/// Returns nullopt when Tr[E rho] / (Tr E Tr rho) < 1e-12 at an output point.
std::optional<std::vector<double>> weak_value_series(const ClickRecord& bob_record, const SimParams& p,
                                                     std::size_t stride);

/// Ensemble mean and standard error of weak_value_series over equiprobable
/// records; excluded records are counted and left out of the mean.
SuspectationCurve suspectation_curve(const std::vector<ClickRecord>& records, const SimParams& p,
                                     std::size_t stride = 10);

}  // namespace cfq::smoothing
