#include "cfq/smoothing/rate.hpp"

#include <algorithm>
#include <cmath>

#include "cfq/error.hpp"
#include "cfq/qubit/dynamics.hpp"

namespace cfq::smoothing {

PiecewiseLinearRate::PiecewiseLinearRate(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size() || times_.size() < 2) throw InputError("rate needs matching knot arrays");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw InputError("rate knots must be finite with non-negative values");
    }
    if (i > 0 && times_[i] < times_[i - 1]) throw InputError("rate knot times must be non-decreasing");
  }
  if (!(times_.back() > times_.front())) throw InputError("rate must span a positive interval");
  cumulative_.assign(times_.size(), 0.0);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (values_[i - 1] + values_[i]) * (times_[i] - times_[i - 1]);
  }
}

std::size_t PiecewiseLinearRate::segment(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (i + 1 >= times_.size()) i = times_.size() - 2;
  return i;
}

double PiecewiseLinearRate::value(double t) const {
  if (times_.empty()) throw InputError("empty rate");
  const double tol = 1e-12 * std::max(1.0, std::abs(end()));
  if (t < begin() - tol || t > end() + tol) throw InputError("rate evaluated outside its grid");
  if (t >= end()) return values_.back();
  const std::size_t i = segment(t);
  const double h = times_[i + 1] - times_[i];
  if (!(h > 0.0)) return values_[i + 1];
  const double x = std::clamp((t - times_[i]) / h, 0.0, 1.0);
  return values_[i] + x * (values_[i + 1] - values_[i]);
}

double PiecewiseLinearRate::cumulative(double t) const {
  if (times_.empty()) throw InputError("empty rate");
  if (t <= begin()) return 0.0;
  if (t >= end()) return cumulative_.back();
  const std::size_t i = segment(t);
  const double h = times_[i + 1] - times_[i];
  if (!(h > 0.0)) return cumulative_[i];
  const double x = t - times_[i];
  const double slope = (values_[i + 1] - values_[i]) / h;
  return cumulative_[i] + values_[i] * x + 0.5 * slope * x * x;
}

double PiecewiseLinearRate::integral(double t0, double t1) const { return cumulative(t1) - cumulative(t0); }

double PiecewiseLinearRate::inverse_cumulative(double target) const {
  if (target <= 0.0) return begin();
  if (target >= cumulative_.back()) return end();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const double h = times_[i + 1] - times_[i];
  const double d = target - cumulative_[i];
  const double slope = (values_[i + 1] - values_[i]) / h;
  // Root of v x + slope x^2 / 2 = d, in the cancellation-free form.
  const double disc = std::max(0.0, values_[i] * values_[i] + 2.0 * slope * d);
  const double denom = values_[i] + std::sqrt(disc);
  const double x = denom > 0.0 ? 2.0 * d / denom : h;
  return times_[i] + std::clamp(x, 0.0, h);
}

PiecewiseLinearRate ostensible_rate(const ClickRecord& alice_record, const SimParams& p) {
  qubit::validate(p);
  alice_record.validate(0.0, p.t_final);
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), alice_record.times.begin(), alice_record.times.end());
  edges.push_back(p.t_final);

  std::vector<double> times, values;
  auto gen = [&](const qubit::QubitOperator& x) {
    return qubit::lindblad_generator(x, p) - p.kappa_a() * qubit::jump(x);
  };
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s], b = edges[s + 1];
    if (!(b > a)) continue;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / p.dt - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    qubit::QubitOperator rho = qubit::ground_projector();
    for (std::size_t k = 0; k <= n; ++k) {
      times.push_back(k == n ? b : a + static_cast<double>(k) * h);
      values.push_back(p.kappa_b() * std::max(0.0, std::real(rho(qubit::kExcited, qubit::kExcited))));
      if (k < n) {
        rho = qubit::rk4_step(gen, rho, h);
        rho *= 1.0 / qubit::trace(rho);
      }
    }
  }
  return PiecewiseLinearRate(std::move(times), std::move(values));
}

ClickRecord sample_jump_times(const PiecewiseLinearRate& rate, double t0, double t1, rng::Engine& g) {
  if (!(t1 >= t0)) throw InputError("sample_jump_times: t1 < t0");
  ClickRecord out;
  double level = rate.cumulative(t0);
  const double total = rate.cumulative(t1);
  for (;;) {
    const double e = rng::exponential(g);
    if (!(e > 0.0)) continue;
    level += e;
    if (level >= total) break;
    const double tau = rate.inverse_cumulative(level);
    if (tau >= t1) break;
    if (tau < t0 || (!out.times.empty() && tau <= out.times.back())) continue;
    out.times.push_back(tau);
  }
  return out;
}

}  // namespace cfq::smoothing
