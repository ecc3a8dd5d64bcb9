#include "cfq/qubit/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cfq/error.hpp"
#include "cfq/qubit/dynamics.hpp"

namespace cfq::qubit {

namespace {

double alice_rate(const SimParams& p, AliceChannel channel) {
  return channel == AliceChannel::photon_counting ? p.kappa_a() : 0.0;
}

void check_clicks(StepClicks clicks, AliceChannel channel) {
  if (clicks.bob && clicks.alice) throw InputError("at most one click per step");
  if (clicks.alice && channel == AliceChannel::unmonitored) {
    throw InputError("Alice click given although her detector is unmonitored");
  }
}

double bob_click_factor(const RateFunction& rate, double t, const SimParams& p) {
  const double lambda = rate.value(t);
  if (!(lambda > 0.0)) {
    throw OstensibleSupportError("Bob click at t = " + std::to_string(t) + " where the ostensible rate is zero");
  }
  return p.kappa_b() / lambda;
}

}  // namespace

void ClickRecord::validate(double t0, double t1) const {
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double s = times[k];
    if (!std::isfinite(s) || s < t0 || s >= t1) throw InputError("click time outside [t0, t1)");
    if (k > 0 && !(s > times[k - 1])) throw InputError("click times must be strictly increasing");
  }
}

void LinearState::checkpoint() {
  const double tr = std::abs(trace(rho));
  if (tr > 0.0 && (tr < 1e-150 || tr > 1e150)) normalize();
}

void LinearState::normalize() {
  const double tr = trace(rho);
  if (!(tr > 0.0)) {
    rho.setZero();
    log_scale = -std::numeric_limits<double>::infinity();
    return;
  }
  rho *= 1.0 / tr;
  log_scale += std::log(tr);
}

QubitOperator no_click_generator(const QubitOperator& rho, const SimParams& p, AliceChannel channel) {
  return lindblad_generator(rho, p) - (p.kappa_b() + alice_rate(p, channel)) * jump(rho);
}

QubitOperator no_click_adjoint_generator(const QubitOperator& effect, const SimParams& p, AliceChannel channel) {
  return lindblad_adjoint_generator(effect, p) - (p.kappa_b() + alice_rate(p, channel)) * jump_adjoint(effect);
}

QubitOperator bob_linear_step(const QubitOperator& rho, StepClicks clicks, const RateFunction& rate, double t,
                              const SimParams& p, double dt, AliceChannel channel) {
  check_clicks(clicks, channel);
  if (clicks.bob) return bob_click_factor(rate, t, p) * jump(rho);
  if (clicks.alice) return p.kappa_a() * jump(rho);
  const double growth = std::exp(rate.integral(t, t + dt));
  return growth * rk4_step([&](const QubitOperator& x) { return no_click_generator(x, p, channel); }, rho, dt);
}

QubitOperator effect_backstep(const QubitOperator& effect, StepClicks clicks, const RateFunction& rate, double t,
                              const SimParams& p, double dt, AliceChannel channel) {
  check_clicks(clicks, channel);
  if (clicks.bob) return bob_click_factor(rate, t, p) * jump_adjoint(effect);
  if (clicks.alice) return p.kappa_a() * jump_adjoint(effect);
  const double growth = std::exp(rate.integral(t, t + dt));
  return growth *
         rk4_step([&](const QubitOperator& x) { return no_click_adjoint_generator(x, p, channel); }, effect, dt);
}

QubitOperator no_jump_propagator(double tau, const SimParams& p) {
  const double wp = p.omega_prime();
  if (!std::isfinite(wp)) throw UnsupportedRegime("closed form needs omega > gamma / 2");
  // -i H_eff = -(gamma/4) I + V with V^2 = -(omega'/2)^2 I.
  QubitOperator v = -(0.25 * p.gamma) * sigma_z() - Complex(0.0, 0.5 * p.omega) * sigma_x();
  const double half = 0.5 * wp * tau;
  return std::exp(-0.25 * p.gamma * tau) * (std::cos(half) * identity() + (2.0 / wp) * std::sin(half) * v);
}

double excitation_factor(double tau, const SimParams& p) {
  const double wp = p.omega_prime();
  if (!std::isfinite(wp)) throw UnsupportedRegime("closed form needs omega > gamma / 2");
  const double s = std::sin(0.5 * wp * tau);
  const double r = p.omega / wp;
  return std::exp(-0.5 * p.gamma * tau) * s * s * r * r * p.kappa_b();
}

LinearState piecewise_solution(const ClickRecord& record, double t0, double t1, const RateFunction& rate,
                               const SimParams& p, const QubitOperator& rho0) {
  if (!(t1 >= t0)) throw InputError("piecewise_solution: t1 < t0");
  record.validate(t0, t1);
  if (!std::isfinite(p.omega_prime())) throw UnsupportedRegime("closed form needs omega > gamma / 2");

  LinearState s;
  s.log_scale = rate.integral(t0, t1);
  QubitOperator state = rho0;
  bool reset = false;
  double prev = t0;
  for (double tk : record.times) {
    const double lambda = rate.value(tk);
    if (!(lambda > 0.0)) throw OstensibleSupportError("Bob click where the ostensible rate is zero");
    double factor;
    if (reset) {
      factor = excitation_factor(tk - prev, p);
    } else {
      const QubitOperator u = no_jump_propagator(tk - prev, p);
      factor = p.kappa_b() * std::real((u * state * u.adjoint())(kExcited, kExcited));
      reset = true;
    }
    s.log_scale += std::log(factor) - std::log(lambda);
    state = ground_projector();
    prev = tk;
  }
  const QubitOperator u = no_jump_propagator(t1 - prev, p);
  s.rho = u * state * u.adjoint();
  return s;
}

LinearState propagate_linear(const ClickRecord& record, double t0, double t1, const RateFunction& rate,
                             const SimParams& p, double dt, AliceChannel channel, const QubitOperator& rho0) {
  if (!(dt > 0.0)) throw InputError("propagate_linear: dt must be positive");
  if (!(t1 >= t0)) throw InputError("propagate_linear: t1 < t0");
  record.validate(t0, t1);

  LinearState s{rho0, 0.0};
  auto evolve = [&](double a, double b) {
    while (a < b) {
      const double h = std::min(dt, b - a);
      s.rho = bob_linear_step(s.rho, {}, rate, a, p, h, channel);
      s.checkpoint();
      // Snap the last sub-step so round-off cannot leave a sliver.
      a = (b - a <= dt * (1.0 + 1e-12)) ? b : a + h;
    }
  };
  double now = t0;
  for (double tk : record.times) {
    evolve(now, tk);
    s.rho = bob_linear_step(s.rho, {.bob = true}, rate, tk, p, 0.0, channel);
    s.checkpoint();
    now = tk;
  }
  evolve(now, t1);
  return s;
}

std::vector<int> align_to_grid(const ClickRecord& record, double t0, double dt, std::size_t n_steps) {
  std::vector<int> counts(n_steps, 0);
  for (double s : record.times) {
    // The small offset keeps grid-point clicks (s = t0 + k dt) in step k despite round-off.
    const double k = std::floor((s - t0) / dt + 1e-9);
    if (k < 0.0 || k >= static_cast<double>(n_steps)) throw InputError("click time outside the grid");
    ++counts[static_cast<std::size_t>(k)];
  }
  return counts;
}

}  // namespace cfq::qubit
