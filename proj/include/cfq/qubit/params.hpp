#pragma once

#include <cstddef>
#include <cstdint>

namespace cfq::qubit {

/// Resonantly driven two-level atom whose fluorescence is split between two
/// detectors (Alice: eta_a, Bob: eta_b). Rates in units of gamma, times in
/// units of 1/gamma.
struct SimParams {
  double gamma = 1.0;
  double omega = 2.0;
  double eta_a = 0.2;
  double eta_b = 0.8;
  double t_final = 10.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;

  double kappa_a() const { return gamma * eta_a; }  ///< Alice's detection rate gamma * eta_a
  double kappa_b() const { return gamma * eta_b; }  ///< Bob's detection rate gamma * eta_b
  /// Damped Rabi frequency sqrt(omega^2 - gamma^2 / 4); NaN when overdamped.
  double omega_prime() const;
  std::size_t steps() const;  ///< round(t_final / dt)
};

/// Throws InputError when eta_a + eta_b != 1 (1e-12), an efficiency leaves
/// [0, 1], dt <= 0, t_final <= 0 or gamma < 0.
void validate(const SimParams& p);

}  // namespace cfq::qubit
