#include "cfq/fpe/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "cfq/error.hpp"
#include "cfq/parallel.hpp"
#include "cfq/qubit/dynamics.hpp"
#include "cfq/rng.hpp"

namespace cfq::fpe {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double theta) {
  const double t = theta - kTwoPi * std::floor(theta / kTwoPi);
  return t >= kTwoPi ? 0.0 : t;
}
}  // namespace

ThetaSamples monte_carlo_theta_samples(const qubit::SimParams& p, double tau, std::size_t n_paths, double dt) {
  qubit::validate(p);
  if (!(tau >= 0.0)) throw InputError("tau must be non-negative");
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (n_paths == 0) throw InputError("n_paths must be positive");
  using qubit::QubitOperator;
  const auto steps = static_cast<std::size_t>(std::llround(tau / dt));
  const double h = steps > 0 ? tau / static_cast<double>(steps) : 0.0;
  const double ka = p.kappa_a(), kb = p.kappa_b();
  const qubit::Complex i(0.0, 1.0);
  const QubitOperator c = i * qubit::sigma_minus();
  const QubitOperator drift =
      qubit::identity() - i * h * qubit::hamiltonian(p) - (0.5 * (ka + kb) * h) * qubit::excited_projector();

  ThetaSamples out;
  out.theta.resize(n_paths);
  out.weight.resize(n_paths);
  parallel_for(n_paths, [&](std::size_t path) {
    rng::Engine g = rng::stream(p.seed, "theta-mc", path);
    std::normal_distribution<double> normal(0.0, std::sqrt(h > 0.0 ? h : 1.0));
    QubitOperator rho = qubit::ground_projector();
    double log_w = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double ee = std::real(rho(qubit::kExcited, qubit::kExcited));
      const double dy = normal(g) + std::sqrt(ka) * qubit::expectation(rho, qubit::sigma_y()) * h;
      const QubitOperator m = drift + (std::sqrt(ka) * dy) * c;
      rho = m * rho * m.adjoint();
      rho *= 1.0 / qubit::trace(rho);
      log_w -= kb * ee * h;
    }
    out.theta[path] = wrap(std::atan2(qubit::expectation(rho, qubit::sigma_y()), qubit::expectation(rho, qubit::sigma_z())));
    out.weight[path] = std::exp(log_w);
  });
  return out;
}

ThetaPdf monte_carlo_theta_distribution(const ThetaSamples& samples, std::size_t n_grid) {
  if (n_grid < 4) throw InputError("histogram grid too small");
  ThetaPdf pdf;
  pdf.values.assign(n_grid, 0.0);
  const double h = kTwoPi / static_cast<double>(n_grid);
  double total = 0.0;
  for (std::size_t k = 0; k < samples.theta.size(); ++k) {
    const auto bin = static_cast<std::size_t>(std::floor(wrap(samples.theta[k] + 0.5 * h) / h)) % n_grid;
    pdf.values[bin] += samples.weight[k];
    total += samples.weight[k];
  }
  if (!(total > 0.0)) throw DegenerateEnsemble("all Monte Carlo weights are zero");
  for (double& v : pdf.values) v /= total * h;
  return pdf;
}

double ks_distance(const ThetaSamples& samples, const ThetaPdf& pdf) {
  const std::size_t n = samples.theta.size();
  if (n == 0 || samples.weight.size() != n) throw InputError("ks_distance needs weighted samples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples.theta[a] < samples.theta[b]; });
  const double total = std::accumulate(samples.weight.begin(), samples.weight.end(), 0.0);
  if (!(total > 0.0)) throw DegenerateEnsemble("all Monte Carlo weights are zero");

  // Cumulative trapezoid table of the density at the grid points.
  const std::size_t m = pdf.size();
  const double h = pdf.spacing();
  std::vector<double> table(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) table[j + 1] = table[j] + 0.5 * h * (pdf.values[j] + pdf.values[(j + 1) % m]);
  const double mass = table[m];
  if (!(mass > 0.0)) throw DegenerateEnsemble("density has no positive mass");
  auto model = [&](double th) {
    const auto j = std::min(m - 1, static_cast<std::size_t>(th / h));
    const double x = th / h - static_cast<double>(j);
    const double a = pdf.values[j], b = pdf.values[(j + 1) % m];
    return (table[j] + h * (a * x + 0.5 * (b - a) * x * x)) / mass;
  };

  double d = 0.0, below = 0.0;
  for (std::size_t k : order) {
    const double f = model(samples.theta[k]);
    const double above = below + samples.weight[k] / total;
    d = std::max({d, std::abs(f - below), std::abs(f - above)});
    below = above;
  }
  return d;
}

}  // namespace cfq::fpe
