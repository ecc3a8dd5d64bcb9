#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cfq/qubit/linear.hpp"
#include "cfq/smoothing/rate.hpp"

namespace cfq::smoothing {

/// Bob records for one stretch [t0, t1) between Alice clicks, sampled from the
/// ostensible rate, with log weights (-inf for zero weight).
struct WeightedEnsemble {
  std::size_t interval = 0;  ///< 0 for [0, first Alice click), then one per click
  double t0 = 0.0;
  double t1 = 0.0;
  bool ends_at_alice_click = false;
  std::vector<ClickRecord> records;
  std::vector<double> log_weights;

  /// Weights scaled to sum to 1. Throws DegenerateEnsemble if all are zero.
  std::vector<double> normalized_weights() const;
};

/// Log weight of a Bob record on [t0, t1) under the ostensible rate, from the
/// ground state at t0 with Alice seeing no click inside: log Tr[rho~ |e><e|]
/// at t1 when project_excited (the stretch ends at an Alice click), else
/// log Tr[rho~]. Uses the closed form when omega > gamma/2 and fourth-order
/// integration with step p.dt otherwise.
double record_weight(const ClickRecord& record, double t0, double t1, const qubit::RateFunction& rate,
                     const SimParams& p, bool project_excited);

/// One ensemble per stretch between Alice clicks, each with n_per_interval
/// records drawn on stream (p.seed, "ostensible-<interval>", index).
/// Weights factorize across stretches because every Alice click resets the
/// atom to |g>.
std::vector<WeightedEnsemble> build_ostensible_ensemble(const ClickRecord& alice_record, const SimParams& p,
                                                        std::size_t n_per_interval);
std::vector<WeightedEnsemble> build_ostensible_ensemble(const ClickRecord& alice_record, const SimParams& p,
                                                        std::size_t n_per_interval, const PiecewiseLinearRate& rate);

/// Indices of n_out draws with replacement: for uniform R in (0, 1], the
/// record k with W_{k-1} < R <= W_k on the cumulative normalized weights.
std::vector<std::size_t> resample_indices(const WeightedEnsemble& ensemble, std::size_t n_out, rng::Engine& g);
std::vector<ClickRecord> resample(const WeightedEnsemble& ensemble, std::size_t n_out, rng::Engine& g);

/// Full-horizon records: draw independently from every stretch and
/// concatenate. Uses stream (seed, "resample", 0).
std::vector<ClickRecord> resample_joint(const std::vector<WeightedEnsemble>& ensembles, std::size_t n_out,
                                        std::uint64_t seed);

/// Histogram of click times per record and unit time, with standard errors.
struct RateCurve {
  std::vector<double> t;  ///< bin centers
  std::vector<double> value;
  std::vector<double> stderr_;
  double bin_width = 0.0;
};

/// Bins [t0, t0 + bin_width), ...; value = count / (n_records * bin_width).
/// n_records = 0 means records.size().
RateCurve conditioned_jump_rate(const std::vector<ClickRecord>& records, double t0, double t1, double bin_width,
                                std::size_t n_records = 0);

/// Rate curve sampled at bin centers from a rate function (for comparison plots).
RateCurve tabulate_rate(const qubit::RateFunction& rate, double t0, double t1, double bin_width);

/// Centered moving average over `half_window` bins on each side (truncated at
/// the ends).
std::vector<double> moving_average(const std::vector<double>& v, std::size_t half_window);

struct Peak {
  double t = 0.0;
  double height = 0.0;
};
/// Maximum of the smoothed curve over bin centers in [t_lo, t_hi).
Peak smoothed_peak(const RateCurve& curve, double t_lo, double t_hi, double smoothing_width);

}  // namespace cfq::smoothing
