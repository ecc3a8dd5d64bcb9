#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace cfq::fpe {

/// Density over the Bloch angle theta on a periodic grid theta_i = i * 2 pi / n,
/// i = 0..n-1 (theta = 2 pi is the same point as theta = 0). The state it
/// describes is rho = (I + sin(theta) sigma_y + cos(theta) sigma_z) / 2.
struct ThetaPdf {
  std::vector<double> values;
  double time = 0.0;
  double clipped_mass = 0.0;  ///< total mass added by clipping negative round-off

  std::size_t size() const { return values.size(); }
  double spacing() const;
  double theta(std::size_t i) const;
  /// Periodic trapezoid rule (equal weights).
  double mass() const;
};

/// Wrapped Gaussian exp(-(theta - mu)^2 / (2 sigma^2)) / sqrt(2 pi sigma^2),
/// summed over 2 pi images. Throws InputError unless sigma > 0 and n_grid >= 4.
ThetaPdf gaussian_init(double mu, double sigma, std::size_t n_grid);

/// Divides by mass(). Throws DegenerateEnsemble when the mass is not positive.
ThetaPdf normalize_pdf(const ThetaPdf& pdf);

/// Trapezoid integral over 0 <= theta <= pi (where sin theta >= 0) of the
/// normalized density, endpoints at half weight. Needs an even grid size.
double positive_mass(const ThetaPdf& pdf);

/// <sigma_y> of the pure state at angle theta.
inline double sigma_y_of_theta(double theta) { return std::sin(theta); }

/// Cumulative distribution of the normalized density on [0, 2 pi), piecewise
/// linear between grid points (trapezoid in each cell).
double cdf(const ThetaPdf& pdf, double theta);

}  // namespace cfq::fpe
