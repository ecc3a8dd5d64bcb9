#pragma once

#include <cstddef>
#include <numbers>

#include "cfq/fpe/theta_pdf.hpp"
#include "cfq/qubit/params.hpp"

namespace cfq::fpe {

struct FpeParams {
  double gamma = 1.0;
  double omega = 2.0;
  double eta_a = 0.2;
  double eta_b = 0.8;
  std::size_t n_grid = 2048;
  double mu = std::numbers::pi;
  double sigma = 0.01;
  double cfl = 0.4;

  static FpeParams from(const qubit::SimParams& p);
};

/// Throws InputError unless n_grid >= 512 and even, sigma > 0, rates and
/// efficiencies are non-negative and 0 < cfl <= 0.5.
void validate(const FpeParams& fp);

/// Coefficients of the angle equation
///   dp/dt = -d/dtheta[A p] - (gamma eta_b / 2)(1 + cos) p + (1/2) d2/dtheta2[B^2 p]
///           + d/dtheta[B sqrt(gamma eta_a) sin p]
/// with A = -(omega - (gamma eta_b / 2) sin + (gamma eta_a / 2) cos sin) and
/// B = -sqrt(gamma eta_a)(1 + cos).
double drift_a(double theta, const FpeParams& fp);
double noise_b(double theta, const FpeParams& fp);
/// Net advection velocity A - B sqrt(gamma eta_a) sin.
double velocity(double theta, const FpeParams& fp);
double sink(double theta, const FpeParams& fp);

struct EvolveStats {
  std::size_t advection_steps = 0;
  std::size_t diffusion_substeps = 0;
};

/// Advances the unnormalized density from t0 to t1. Advection and the sink
/// use fifth-order WENO fluxes with Lax-Friedrichs splitting and third-order
/// SSP Runge-Kutta at dt <= cfl * dtheta / max|velocity|. Diffusion is
/// Strang-split around each advection step and sub-cycled with the
/// conservative three-point scheme at dt <= cfl * dtheta^2 / max B^2, which
/// keeps it positive. Negative round-off is clipped after every step and the
/// clipped mass added to pdf.clipped_mass.
ThetaPdf fpe_evolve(const ThetaPdf& pdf, const FpeParams& fp, double t0, double t1, EvolveStats* stats = nullptr);

/// Characteristic-record protocol: Bob clicks at t_click - tau (the atom is reset to
/// |g>, theta = pi), then sees no click until t_click while Alice records
/// Y-homodyne. Returns the normalized density at t_click.
ThetaPdf characteristic_record_protocol(const FpeParams& fp, double tau, EvolveStats* stats = nullptr);

}  // namespace cfq::fpe
