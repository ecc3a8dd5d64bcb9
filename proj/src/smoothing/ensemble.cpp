#include "cfq/smoothing/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cfq/error.hpp"
#include "cfq/parallel.hpp"

namespace cfq::smoothing {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> cumulative_weights(const WeightedEnsemble& e) {
  std::vector<double> w = e.normalized_weights();
  for (std::size_t k = 1; k < w.size(); ++k) w[k] += w[k - 1];
  return w;
}

std::size_t draw(const std::vector<double>& cumulative, std::size_t last_positive, rng::Engine& g) {
  const double r = rng::uniform_open0(g);
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
  // Round-off can leave the total a hair below 1.
  if (it == cumulative.end()) return last_positive;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::size_t last_positive_index(const WeightedEnsemble& e) {
  for (std::size_t k = e.log_weights.size(); k-- > 0;) {
    if (e.log_weights[k] > kNegInf) return k;
  }
  throw DegenerateEnsemble("all ensemble weights are zero");
}

std::size_t bin_count(double t0, double t1, double width) {
  if (!(width > 0.0)) throw InputError("bin width must be positive");
  if (!(t1 > t0)) throw InputError("rate curve needs t1 > t0");
  return static_cast<std::size_t>(std::ceil((t1 - t0) / width - 1e-9));
}

}  // namespace

std::vector<double> WeightedEnsemble::normalized_weights() const {
  if (log_weights.empty()) throw DegenerateEnsemble("empty ensemble");
  double top = kNegInf;
  for (double l : log_weights) {
    if (std::isnan(l) || l == std::numeric_limits<double>::infinity()) {
      throw ValidationError("ensemble weights must be finite or zero");
    }
    top = std::max(top, l);
  }
  if (top == kNegInf) throw DegenerateEnsemble("all ensemble weights are zero");
  std::vector<double> w(log_weights.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(log_weights[k] - top);
    sum += w[k];
  }
  for (double& x : w) x /= sum;
  return w;
}

double record_weight(const ClickRecord& record, double t0, double t1, const qubit::RateFunction& rate,
                     const SimParams& p, bool project_excited) {
  qubit::LinearState s;
  if (std::isfinite(p.omega_prime())) {
    s = qubit::piecewise_solution(record, t0, t1, rate, p);
  } else {
    s = qubit::propagate_linear(record, t0, t1, rate, p, p.dt, qubit::AliceChannel::photon_counting);
  }
  const double x = project_excited ? std::real(s.rho(qubit::kExcited, qubit::kExcited)) : qubit::trace(s.rho);
  if (!(x > 0.0) || s.log_scale == kNegInf) return kNegInf;
  return s.log_scale + std::log(x);
}

std::vector<WeightedEnsemble> build_ostensible_ensemble(const ClickRecord& alice_record, const SimParams& p,
                                                        std::size_t n_per_interval) {
  return build_ostensible_ensemble(alice_record, p, n_per_interval, ostensible_rate(alice_record, p));
}

std::vector<WeightedEnsemble> build_ostensible_ensemble(const ClickRecord& alice_record, const SimParams& p,
                                                        std::size_t n_per_interval, const PiecewiseLinearRate& rate) {
  qubit::validate(p);
  if (n_per_interval == 0) throw InputError("n_per_interval must be at least 1");
  alice_record.validate(0.0, p.t_final);
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), alice_record.times.begin(), alice_record.times.end());
  edges.push_back(p.t_final);

  std::vector<WeightedEnsemble> out;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    if (!(edges[s + 1] > edges[s])) continue;
    WeightedEnsemble e;
    e.interval = s;
    e.t0 = edges[s];
    e.t1 = edges[s + 1];
    e.ends_at_alice_click = s + 2 < edges.size();
    e.records.resize(n_per_interval);
    e.log_weights.resize(n_per_interval);
    const std::string tag = "ostensible-" + std::to_string(s);
    parallel_for(n_per_interval, [&](std::size_t i) {
      rng::Engine g = rng::stream(p.seed, tag, i);
      e.records[i] = sample_jump_times(rate, e.t0, e.t1, g);
      e.log_weights[i] = record_weight(e.records[i], e.t0, e.t1, rate, p, e.ends_at_alice_click);
    });
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::size_t> resample_indices(const WeightedEnsemble& ensemble, std::size_t n_out, rng::Engine& g) {
  const std::vector<double> cumulative = cumulative_weights(ensemble);
  const std::size_t last = last_positive_index(ensemble);
  std::vector<std::size_t> out(n_out);
  for (auto& k : out) k = draw(cumulative, last, g);
  return out;
}

std::vector<ClickRecord> resample(const WeightedEnsemble& ensemble, std::size_t n_out, rng::Engine& g) {
  std::vector<ClickRecord> out;
  out.reserve(n_out);
  for (std::size_t k : resample_indices(ensemble, n_out, g)) out.push_back(ensemble.records[k]);
  return out;
}

std::vector<ClickRecord> resample_joint(const std::vector<WeightedEnsemble>& ensembles, std::size_t n_out,
                                        std::uint64_t seed) {
  std::vector<std::vector<double>> cumulative;
  std::vector<std::size_t> last;
  for (const auto& e : ensembles) {
    cumulative.push_back(cumulative_weights(e));
    last.push_back(last_positive_index(e));
  }
  rng::Engine g = rng::stream(seed, "resample", 0);
  std::vector<ClickRecord> out(n_out);
  for (auto& rec : out) {
    for (std::size_t s = 0; s < ensembles.size(); ++s) {
      const ClickRecord& part = ensembles[s].records[draw(cumulative[s], last[s], g)];
      rec.times.insert(rec.times.end(), part.times.begin(), part.times.end());
    }
  }
  return out;
}

RateCurve conditioned_jump_rate(const std::vector<ClickRecord>& records, double t0, double t1, double bin_width,
                                std::size_t n_records) {
  const std::size_t nb = bin_count(t0, t1, bin_width);
  const double n = static_cast<double>(n_records ? n_records : records.size());
  RateCurve c;
  c.bin_width = bin_width;
  c.t.resize(nb);
  c.value.assign(nb, 0.0);
  c.stderr_.assign(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) c.t[b] = t0 + (static_cast<double>(b) + 0.5) * bin_width;
  if (n == 0.0) return c;

  std::vector<double> sum(nb, 0.0), sq(nb, 0.0);
  for (const auto& r : records) {
    std::size_t current = nb;
    double count = 0.0;
    auto flush = [&] {
      if (current < nb) {
        sum[current] += count;
        sq[current] += count * count;
      }
    };
    for (double s : r.times) {
      if (s < t0 || s >= t1) throw InputError("click time outside the rate-curve range");
      const auto b = std::min(nb - 1, static_cast<std::size_t>(std::floor((s - t0) / bin_width + 1e-9)));
      if (b != current) {
        flush();
        current = b;
        count = 0.0;
      }
      count += 1.0;
    }
    flush();
  }
  for (std::size_t b = 0; b < nb; ++b) {
    const double mean = sum[b] / n;
    const double var = n > 1.0 ? std::max(0.0, (sq[b] - n * mean * mean) / (n - 1.0)) : 0.0;
    c.value[b] = mean / bin_width;
    c.stderr_[b] = std::sqrt(var / n) / bin_width;
  }
  return c;
}

RateCurve tabulate_rate(const qubit::RateFunction& rate, double t0, double t1, double bin_width) {
  const std::size_t nb = bin_count(t0, t1, bin_width);
  RateCurve c;
  c.bin_width = bin_width;
  c.stderr_.assign(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    const double t = t0 + (static_cast<double>(b) + 0.5) * bin_width;
    c.t.push_back(t);
    c.value.push_back(rate.value(std::min(t, t1)));
  }
  return c;
}

std::vector<double> moving_average(const std::vector<double>& v, std::size_t half_window) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i >= half_window ? i - half_window : 0;
    const std::size_t hi = std::min(v.size() - 1, i + half_window);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += v[j];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

Peak smoothed_peak(const RateCurve& curve, double t_lo, double t_hi, double smoothing_width) {
  const auto half = static_cast<std::size_t>(std::llround(0.5 * smoothing_width / curve.bin_width));
  const std::vector<double> smooth = moving_average(curve.value, half);
  Peak best{0.0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    if (curve.t[i] < t_lo || curve.t[i] >= t_hi) continue;
    if (smooth[i] > best.height) best = {curve.t[i], smooth[i]};
  }
  if (!std::isfinite(best.height)) throw InputError("no bins inside the peak search window");
  return best;
}

}  // namespace cfq::smoothing
