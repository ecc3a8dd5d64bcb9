#include "cfq/smoothing/suspectation.hpp"

#include <algorithm>
#include <cmath>

#include "cfq/error.hpp"
#include "cfq/parallel.hpp"

namespace cfq::smoothing {

namespace {

using qubit::QubitOperator;

// Any constant reference rate cancels between numerator and denominator.
double reference_rate(const SimParams& p) { return p.kappa_b() > 0.0 ? p.kappa_b() : 1.0; }

}  // namespace

double homodyne_weak_value(const QubitOperator& effect, const QubitOperator& rho) {
  const qubit::Complex i(0.0, 1.0);
  const double norm = std::real((effect * rho).trace());
  return 2.0 * std::real((effect * i * qubit::sigma_minus() * rho).trace()) / norm;
}

std::optional<std::vector<double>> weak_value_series(const ClickRecord& bob_record, const SimParams& p,
                                                     std::size_t stride) {
  qubit::validate(p);
  if (stride == 0) throw InputError("output stride must be positive");
  const std::size_t n = p.steps();
  const std::vector<int> clicks = qubit::align_to_grid(bob_record, 0.0, p.dt, n);
  const qubit::ConstantRate rate(reference_rate(p));
  const auto channel = qubit::AliceChannel::unmonitored;
  const std::size_t m = n / stride + 1;

  std::vector<QubitOperator> effects(m);
  QubitOperator e = qubit::identity();
  if (n % stride == 0) effects[m - 1] = e;
  for (std::size_t k = n; k-- > 0;) {
    const double t = static_cast<double>(k) * p.dt;
    for (int c = 0; c < std::max(1, clicks[k]); ++c) {
      e = qubit::effect_backstep(e, {.bob = clicks[k] > 0}, rate, t, p, p.dt, channel);
    }
    const double tr = qubit::trace(e);
    if (!(tr > 0.0)) return std::nullopt;
    e *= 1.0 / tr;
    if (k % stride == 0) effects[k / stride] = e;
  }

  std::vector<double> out(m);
  QubitOperator rho = qubit::ground_projector();
  for (std::size_t k = 0; k <= n; ++k) {
    if (k % stride == 0) {
      const QubitOperator& ek = effects[k / stride];
      const double overlap = std::real((ek * rho).trace());
      if (!(overlap >= 1e-12 * qubit::trace(ek) * qubit::trace(rho))) return std::nullopt;
      out[k / stride] = homodyne_weak_value(ek, rho);
    }
    if (k == n) break;
    const double t = static_cast<double>(k) * p.dt;
    for (int c = 0; c < std::max(1, clicks[k]); ++c) {
      rho = qubit::bob_linear_step(rho, {.bob = clicks[k] > 0}, rate, t, p, p.dt, channel);
    }
    const double tr = qubit::trace(rho);
    if (!(tr > 0.0)) return std::nullopt;
    rho *= 1.0 / tr;
  }
  return out;
}

SuspectationCurve suspectation_curve(const std::vector<ClickRecord>& records, const SimParams& p,
                                     std::size_t stride) {
  qubit::validate(p);
  if (records.empty()) throw InputError("suspectation needs at least one record");
  if (stride == 0) throw InputError("output stride must be positive");
  std::vector<std::optional<std::vector<double>>> series(records.size());
  parallel_for(records.size(), [&](std::size_t i) { series[i] = weak_value_series(records[i], p, stride); });

  const std::size_t m = p.steps() / stride + 1;
  SuspectationCurve c;
  c.t.resize(m);
  for (std::size_t j = 0; j < m; ++j) c.t[j] = static_cast<double>(j * stride) * p.dt;
  std::vector<double> sum(m, 0.0), sq(m, 0.0);
  for (const auto& s : series) {
    if (!s) {
      ++c.n_excluded;
      continue;
    }
    ++c.n_records;
    for (std::size_t j = 0; j < m; ++j) {
      sum[j] += (*s)[j];
      sq[j] += (*s)[j] * (*s)[j];
    }
  }
  if (c.n_records == 0) throw DegenerateEnsemble("every record was excluded from the suspectation");
  const double n = static_cast<double>(c.n_records);
  c.value.resize(m);
  c.stderr_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double mean = sum[j] / n;
    const double var = n > 1.0 ? std::max(0.0, (sq[j] - n * mean * mean) / (n - 1.0)) : 0.0;
    c.value[j] = mean;
    c.stderr_[j] = std::sqrt(var / n);
  }
  return c;
}

}  // namespace cfq::smoothing
