#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cfq/qubit/linear.hpp"
#include "cfq/qubit/operators.hpp"
#include "cfq/qubit/params.hpp"
#include "cfq/rng.hpp"

namespace cfq::qubit {

/// Normalized filtered states on the grid t_k = k dt, k = 0..n_steps, plus the
/// log of the record probability density accumulated along the way.
struct FilteredTrajectory {
  double dt = 0.0;
  std::vector<QubitOperator> states;
  std::vector<double> log_density;
};

/// Alice's photon-counting filter for a given record, starting from rho0.
/// A click inside [t_k, t_k + dt) resets the state at t_{k+1} to |g><g| with
/// density factor gamma eta_a <e|rho|e>; otherwise the no-click generator
/// L - gamma eta_a J is integrated at fourth order and renormalized.
FilteredTrajectory filter_jump_record(const ClickRecord& record, const SimParams& p,
                                      const QubitOperator& rho0 = ground_projector());

/// Positivity-preserving homodyne step for the physical measure: with
/// dY = dW + sqrt(kappa) <sigma_y> dt and M = 1 - i H_eff dt + sqrt(kappa) c dY,
///   rho' = M rho M^dagger + (gamma - kappa) dt J rho,  normalized.
/// Agrees with homodyne_filter_step to the order of Euler-Maruyama.
QubitOperator homodyne_trajectory_step(const QubitOperator& rho, double dW, const SimParams& p, double dt);

/// One physical Y-homodyne record: per-step Wiener increments dW (variance dt)
/// and currents Y_k = <sigma_y>_k + dW_k / (sqrt(kappa) dt).
struct HomodynePath {
  double dt = 0.0;
  std::vector<double> dW;
  std::vector<double> current;
};

/// Mean and standard error of the normalized Bloch vector on an output grid.
struct BlochStatistics {
  std::vector<double> t;
  std::array<std::vector<double>, 3> mean;    ///< x, y, z
  std::array<std::vector<double>, 3> stderr_;  ///< x, y, z
  std::size_t n_paths = 0;
  double min_eigenvalue = 0.0;  ///< over every normalized state visited
};

/// Samples a physical photon-counting record for Alice on [0, t_final)
/// (click probability gamma eta_a <e|rho|e> dt per step) and fills `states`
/// with the filtered states every `stride` steps when non-null.
ClickRecord sample_jump_record(const SimParams& p, rng::Engine& g, std::size_t stride = 1,
                               std::vector<QubitOperator>* states = nullptr);

HomodynePath sample_homodyne_path(const SimParams& p, rng::Engine& g, std::size_t stride = 1,
                                  std::vector<QubitOperator>* states = nullptr);

/// Record-averaged normalized filtered states of n_paths physical records,
/// sampled every `stride` steps from the ground state. Each path uses
/// rng::stream(p.seed, tag, index); results do not depend on CFQ_THREADS.
BlochStatistics average_jump_trajectories(const SimParams& p, std::size_t n_paths, std::size_t stride);
BlochStatistics average_homodyne_trajectories(const SimParams& p, std::size_t n_paths, std::size_t stride);

/// Lindblad Bloch components on the same grid, ground start.
BlochStatistics lindblad_reference(const SimParams& p, std::size_t stride);

}  // namespace cfq::qubit
