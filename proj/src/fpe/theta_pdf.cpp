#include "cfq/fpe/theta_pdf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cfq/error.hpp"

namespace cfq::fpe {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double ThetaPdf::spacing() const { return kTwoPi / static_cast<double>(values.size()); }

double ThetaPdf::theta(std::size_t i) const { return static_cast<double>(i) * spacing(); }

double ThetaPdf::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * spacing();
}

ThetaPdf gaussian_init(double mu, double sigma, std::size_t n_grid) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("gaussian_init: sigma must be positive");
  if (!std::isfinite(mu)) throw InputError("gaussian_init: mu must be finite");
  if (n_grid < 4) throw InputError("gaussian_init: grid too small");
  ThetaPdf pdf;
  pdf.values.resize(n_grid);
  const double norm = 1.0 / std::sqrt(kTwoPi * sigma * sigma);
  const double center = mu - kTwoPi * std::floor(mu / kTwoPi);
  // Enough images that the neglected tails are below double precision.
  const int images = 1 + static_cast<int>(std::ceil(10.0 * sigma / kTwoPi));
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double th = pdf.theta(i);
    double v = 0.0;
    for (int k = -images; k <= images; ++k) {
      const double d = th - center - kTwoPi * k;
      v += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    pdf.values[i] = norm * v;
  }
  return pdf;
}

ThetaPdf normalize_pdf(const ThetaPdf& pdf) {
  const double m = pdf.mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw DegenerateEnsemble("density has no positive mass");
  ThetaPdf out = pdf;
  for (double& v : out.values) v /= m;
  out.clipped_mass /= m;
  return out;
}

double positive_mass(const ThetaPdf& pdf) {
  const std::size_t n = pdf.size();
  if (n < 2 || n % 2 != 0) throw InputError("positive_mass needs an even grid size");
  const ThetaPdf p = normalize_pdf(pdf);
  const std::size_t half = n / 2;  // theta = pi
  double s = 0.5 * (p.values[0] + p.values[half]);
  for (std::size_t i = 1; i < half; ++i) s += p.values[i];
  return s * p.spacing();
}

double cdf(const ThetaPdf& pdf, double theta) {
  const std::size_t n = pdf.size();
  if (n == 0) throw InputError("empty density");
  const double m = pdf.mass();
  if (!(m > 0.0)) throw DegenerateEnsemble("density has no positive mass");
  if (theta <= 0.0) return 0.0;
  if (theta >= kTwoPi) return 1.0;
  const double h = pdf.spacing();
  const auto cell = std::min(n - 1, static_cast<std::size_t>(theta / h));
  double c = 0.0;
  for (std::size_t i = 0; i < cell; ++i) c += 0.5 * (pdf.values[i] + pdf.values[i + 1]);
  const double a = pdf.values[cell];
  const double b = pdf.values[(cell + 1) % n];
  const double x = theta / h - static_cast<double>(cell);
  c += a * x + 0.5 * (b - a) * x * x;
  return std::clamp(c * h / m, 0.0, 1.0);
}

}  // namespace cfq::fpe
