#pragma once

#include <cstddef>
#include <vector>

#include "cfq/fpe/theta_pdf.hpp"
#include "cfq/qubit/params.hpp"

namespace cfq::fpe {

/// Weighted Bloch angles in [0, 2 pi) from independent trajectories.
struct ThetaSamples {
  std::vector<double> theta;
  std::vector<double> weight;
};

/// Simulates n_paths normalized states from |g><g| for a duration tau while
/// Alice records Y-homodyne (physical measure) and Bob sees no click, with
/// the positivity-preserving step
///   M = 1 - i H dt - (gamma eta_a + gamma eta_b) sigma_+ sigma_- dt / 2 + sqrt(gamma eta_a) (i sigma_-) dY,
/// and weights each path by its no-click survival exp(-gamma eta_b int <sigma_+ sigma_-> dt).
/// theta = atan2(<sigma_y>, <sigma_z>). Streams: (p.seed, "theta-mc", path).
ThetaSamples monte_carlo_theta_samples(const qubit::SimParams& p, double tau, std::size_t n_paths, double dt);

/// Weighted histogram on the periodic grid (bin i centered at theta_i).
ThetaPdf monte_carlo_theta_distribution(const ThetaSamples& samples, std::size_t n_grid);

/// Kolmogorov-Smirnov distance on [0, 2 pi) between the weighted empirical
/// distribution and the density's CDF.
double ks_distance(const ThetaSamples& samples, const ThetaPdf& pdf);

}  // namespace cfq::fpe
