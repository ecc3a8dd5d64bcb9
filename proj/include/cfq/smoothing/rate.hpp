#pragma once

#include <cstddef>
#include <vector>

#include "cfq/qubit/linear.hpp"
#include "cfq/qubit/params.hpp"
#include "cfq/rng.hpp"

namespace cfq::smoothing {

using qubit::ClickRecord;
using qubit::SimParams;

/// Piecewise-linear, right-continuous rate through knots (t_i, lambda_i).
/// A repeated knot time marks a discontinuity: the first value is the left
/// limit, the second the value from that time on. Integrals are exact for the
/// interpolant, so sampling and weighting see the same function.
class PiecewiseLinearRate final : public qubit::RateFunction {
 public:
  PiecewiseLinearRate() = default;
  /// Throws InputError unless times are non-decreasing, with at least two
  /// distinct times, and values are finite and >= 0.
  PiecewiseLinearRate(std::vector<double> times, std::vector<double> values);

  double value(double t) const override;
  double integral(double t0, double t1) const override;
  /// Lambda(t) = integral from begin() to t.
  double cumulative(double t) const;
  /// Smallest t with cumulative(t) = target, or end() when target exceeds the total.
  double inverse_cumulative(double target) const;

  double begin() const { return times_.front(); }
  double end() const { return times_.back(); }
  const std::vector<double>& knot_times() const { return times_; }
  const std::vector<double>& knot_values() const { return values_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// Ostensible Bob click rate lambda(t) = gamma eta_b <e|rho_t|e>, with rho_t
/// Alice's normalized photon-counting filter on [0, t_final) started from
/// |g><g|. The filter is integrated at fourth order on a grid of spacing at
/// most p.dt in each stretch between Alice clicks; at a click it resets, so
/// lambda drops to 0 there.
PiecewiseLinearRate ostensible_rate(const ClickRecord& alice_record, const SimParams& p);

/// Jump times on [t0, t1) from the inhomogeneous Poisson process with rate
/// `rate`: each waiting time solves exp(-int lambda) = r for uniform r, by
/// exact inversion of the piecewise-linear cumulative integral.
ClickRecord sample_jump_times(const PiecewiseLinearRate& rate, double t0, double t1, rng::Engine& g);

}  // namespace cfq::smoothing
