#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cfq/qubit/operators.hpp"
#include "cfq/qubit/params.hpp"

namespace cfq::qubit {

/// Sorted detector-click times in [t0, t1), units of 1/gamma.
struct ClickRecord {
  std::vector<double> times;

  bool empty() const { return times.empty(); }
  std::size_t size() const { return times.size(); }
  /// Throws InputError unless strictly increasing and inside [t0, t1).
  void validate(double t0, double t1) const;
};

/// Ostensible click rate lambda(t) >= 0 with its exact integral.
class RateFunction {
 public:
  virtual ~RateFunction() = default;
  virtual double value(double t) const = 0;
  virtual double integral(double t0, double t1) const = 0;
};

class ConstantRate final : public RateFunction {
 public:
  explicit ConstantRate(double rate) : rate_(rate) {}
  double value(double) const override { return rate_; }
  double integral(double t0, double t1) const override { return rate_ * (t1 - t0); }

 private:
  double rate_;
};

/// How Alice's share of the fluorescence enters Bob's linear trajectory.
enum class AliceChannel {
  photon_counting,  ///< Alice counts photons; her record is a condition (no-click term removed)
  unmonitored,      ///< Alice's detector is averaged over (e.g. a homodyne record not conditioned on)
};

/// Detections inside one time step.
struct StepClicks {
  bool bob = false;
  bool alice = false;
};

/// Unnormalized operator with a split-off scale: value = rho * exp(log_scale).
struct LinearState {
  QubitOperator rho = QubitOperator::Zero();
  double log_scale = 0.0;

  QubitOperator value() const { return rho * std::exp(log_scale); }
  double log_trace() const { return std::log(trace(rho)) + log_scale; }
  /// Moves the trace into log_scale once it leaves [1e-150, 1e150].
  void checkpoint();
  /// Moves the whole trace into log_scale.
  void normalize();
};

/// Generator of the no-click evolution without the +lambda counter-term:
/// L - gamma eta_b J[sigma_-] (- gamma eta_a J[sigma_-] when Alice counts photons).
QubitOperator no_click_generator(const QubitOperator& rho, const SimParams& p, AliceChannel channel);
QubitOperator no_click_adjoint_generator(const QubitOperator& effect, const SimParams& p, AliceChannel channel);

/// One step of Bob's linear trajectory under the ostensible rate, starting at t:
///   no click:   {1 + dt (L + lambda - gamma eta_b J - gamma eta_a J)} rho
///               (the bracket is integrated at fourth order; the scalar lambda
///               term exactly, as exp of its integral over the step)
///   Bob click:  (gamma eta_b / lambda(t)) J rho
///   Alice click: gamma eta_a J rho
/// Under AliceChannel::unmonitored the gamma eta_a J term is absent and an
/// Alice click is an input error. Bob click with lambda(t) = 0 throws
/// OstensibleSupportError.
QubitOperator bob_linear_step(const QubitOperator& rho, StepClicks clicks, const RateFunction& rate, double t,
                              const SimParams& p, double dt,
                              AliceChannel channel = AliceChannel::photon_counting);

/// Hilbert-Schmidt adjoint of bob_linear_step with the same arguments, so
/// Tr[effect_backstep(E) rho] == Tr[E bob_linear_step(rho)].
QubitOperator effect_backstep(const QubitOperator& effect, StepClicks clicks, const RateFunction& rate, double t,
                              const SimParams& p, double dt,
                              AliceChannel channel = AliceChannel::photon_counting);

/// exp(-i H_eff tau) with H_eff = H - i gamma sigma_+ sigma_- / 2, in closed
/// form for the underdamped case. Throws UnsupportedRegime when omega <= gamma/2.
QubitOperator no_jump_propagator(double tau, const SimParams& p);

/// A(tau) = exp(-gamma tau / 2) sin^2(omega' tau / 2) (omega / omega')^2 eta_b gamma:
/// Bob's click density tau after a reset to the ground state.
double excitation_factor(double tau, const SimParams& p);

/// Closed-form Bob trajectory (Alice counting, no Alice click inside the
/// interval) from rho0 at t0 to t1:
///   exp[int lambda] / prod lambda(s_k) * prod A(s_i - s_{i-1}) * U(t1 - s_n) |g><g| U^dagger
/// (the first factor generalizes to gamma eta_b <e|U rho0 U^dagger|e> when rho0 is not |g><g|).
LinearState piecewise_solution(const ClickRecord& record, double t0, double t1, const RateFunction& rate,
                               const SimParams& p, const QubitOperator& rho0 = ground_projector());

/// Numerical reference for the same trajectory: fourth-order steps of at most
/// dt, split exactly at click times.
LinearState propagate_linear(const ClickRecord& record, double t0, double t1, const RateFunction& rate,
                             const SimParams& p, double dt, AliceChannel channel,
                             const QubitOperator& rho0 = ground_projector());

/// Click counts per step of a uniform grid starting at t0; a click at time s
/// belongs to step floor((s - t0) / dt).
std::vector<int> align_to_grid(const ClickRecord& record, double t0, double dt, std::size_t n_steps);

}  // namespace cfq::qubit
