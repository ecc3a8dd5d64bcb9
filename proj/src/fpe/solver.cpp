#include "cfq/fpe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cfq/error.hpp"

namespace cfq::fpe {

namespace {

// Jiang-Shu WENO5 value at the right face of c from the stencil a b c d e.
double weno5(double a, double b, double c, double d, double e, double eps) {
  const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
  const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
  const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
  const double s0 = 13.0 / 12.0 * (a - 2.0 * b + c) * (a - 2.0 * b + c) + 0.25 * (a - 4.0 * b + 3.0 * c) * (a - 4.0 * b + 3.0 * c);
  const double s1 = 13.0 / 12.0 * (b - 2.0 * c + d) * (b - 2.0 * c + d) + 0.25 * (b - d) * (b - d);
  const double s2 = 13.0 / 12.0 * (c - 2.0 * d + e) * (c - 2.0 * d + e) + 0.25 * (3.0 * c - 4.0 * d + e) * (3.0 * c - 4.0 * d + e);
  const double w0 = 0.1 / ((eps + s0) * (eps + s0));
  const double w1 = 0.6 / ((eps + s1) * (eps + s1));
  const double w2 = 0.3 / ((eps + s2) * (eps + s2));
  return (w0 * q0 + w1 * q1 + w2 * q2) / (w0 + w1 + w2);
}

class Solver {
 public:
  explicit Solver(const FpeParams& fp, std::size_t n) : n_(n), h_(2.0 * std::numbers::pi / static_cast<double>(n)) {
    v_.resize(n);
    m_.resize(n);
    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double th = static_cast<double>(i) * h_;
      v_[i] = velocity(th, fp);
      m_[i] = sink(th, fp);
      const double b = noise_b(th, fp);
      d_[i] = b * b;
      alpha_ = std::max(alpha_, std::abs(v_[i]));
      max_sink_ = std::max(max_sink_, std::abs(m_[i]));
      max_d_ = std::max(max_d_, d_[i]);
    }
    fp_ = fp;
    fplus_.resize(n);
    fminus_.resize(n);
    flux_.resize(n);
  }

  double advection_dt() const {
    double rate = alpha_ / h_;
    rate = std::max(rate, max_sink_);
    return rate > 0.0 ? fp_.cfl / rate : 0.0;
  }
  double diffusion_dt() const { return max_d_ > 0.0 ? fp_.cfl * h_ * h_ / max_d_ : 0.0; }
  bool has_diffusion() const { return max_d_ > 0.0; }

  // One forward-Euler stage of -d/dtheta[v p] + m p. Each face flux is the
  // WENO flux pulled toward the first-order Lax-Friedrichs flux just far
  // enough that both neighbouring cells stay non-negative.
  void euler(const std::vector<double>& p, double dt, std::vector<double>& out) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double f = v_[i] * p[i];
      fplus_[i] = 0.5 * (f + alpha_ * p[i]);
      fminus_[i] = 0.5 * (f - alpha_ * p[i]);
      scale = std::max(scale, std::abs(f) + alpha_ * std::abs(p[i]));
    }
    const double eps = 1e-6 * scale * scale + 1e-300;
    auto at = [&](const std::vector<double>& a, std::ptrdiff_t i) {
      const auto n = static_cast<std::ptrdiff_t>(n_);
      return a[static_cast<std::size_t>(((i % n) + n) % n)];
    };
    const double lambda = dt / h_;
    for (std::size_t k = 0; k < n_; ++k) {
      const auto i = static_cast<std::ptrdiff_t>(k);
      const std::size_t right = k + 1 == n_ ? 0 : k + 1;
      // Face k + 1/2.
      const double high =
          weno5(at(fplus_, i - 2), at(fplus_, i - 1), at(fplus_, i), at(fplus_, i + 1), at(fplus_, i + 2), eps) +
          weno5(at(fminus_, i + 3), at(fminus_, i + 2), at(fminus_, i + 1), at(fminus_, i), at(fminus_, i - 1), eps);
      const double low = fplus_[k] + fminus_[right];
      const double upper = (1.0 + dt * m_[k]) * p[k] / (2.0 * lambda);
      const double lower = -(1.0 + dt * m_[right]) * p[right] / (2.0 * lambda);
      double theta = 1.0;
      if (high > upper && high != low) theta = std::min(theta, (upper - low) / (high - low));
      if (high < lower && high != low) theta = std::min(theta, (lower - low) / (high - low));
      theta = std::clamp(theta, 0.0, 1.0);
      flux_[k] = low + theta * (high - low);
    }
    for (std::size_t k = 0; k < n_; ++k) {
      const double left = flux_[k == 0 ? n_ - 1 : k - 1];
      out[k] = (1.0 + dt * m_[k]) * p[k] - lambda * (flux_[k] - left);
    }
  }

  void advect(std::vector<double>& p, double dt) {
    std::vector<double>& e = work_[0];
    std::vector<double>& u1 = work_[1];
    std::vector<double>& u2 = work_[2];
    e.resize(n_);
    u1.resize(n_);
    u2.resize(n_);
    euler(p, dt, u1);
    euler(u1, dt, e);
    for (std::size_t i = 0; i < n_; ++i) u2[i] = 0.75 * p[i] + 0.25 * e[i];
    euler(u2, dt, e);
    for (std::size_t i = 0; i < n_; ++i) p[i] = p[i] / 3.0 + 2.0 / 3.0 * e[i];
  }

  // (1/2) d2/dtheta2 [D p], conservative three-point form.
  std::size_t diffuse(std::vector<double>& p, double duration) {
    if (!has_diffusion() || duration <= 0.0) return 0;
    const auto sub = static_cast<std::size_t>(std::ceil(duration / diffusion_dt() - 1e-12));
    const double dt = duration / static_cast<double>(sub);
    const double r = 0.5 * dt / (h_ * h_);
    std::vector<double>& q = work_[3];
    q.resize(n_);
    for (std::size_t s = 0; s < sub; ++s) {
      for (std::size_t i = 0; i < n_; ++i) q[i] = d_[i] * p[i];
      for (std::size_t i = 0; i < n_; ++i) {
        const double ql = q[i == 0 ? n_ - 1 : i - 1];
        const double qr = q[i + 1 == n_ ? 0 : i + 1];
        p[i] += r * (ql - 2.0 * q[i] + qr);
      }
    }
    return sub;
  }

  double clip(std::vector<double>& p) const {
    double added = 0.0;
    for (double& x : p) {
      if (x < 0.0) {
        added -= x;
        x = 0.0;
      }
    }
    return added * h_;
  }

 private:
  std::size_t n_;
  double h_;
  FpeParams fp_;
  std::vector<double> v_, m_, d_;
  double alpha_ = 0.0, max_sink_ = 0.0, max_d_ = 0.0;
  std::vector<double> fplus_, fminus_, flux_;
  std::vector<double> work_[4];
};

}  // namespace

FpeParams FpeParams::from(const qubit::SimParams& p) {
  FpeParams fp;
  fp.gamma = p.gamma;
  fp.omega = p.omega;
  fp.eta_a = p.eta_a;
  fp.eta_b = p.eta_b;
  return fp;
}

void validate(const FpeParams& fp) {
  if (fp.n_grid < 512 || fp.n_grid % 2 != 0) throw InputError("n_grid must be even and at least 512");
  if (!(fp.sigma > 0.0)) throw InputError("sigma must be positive");
  if (!(fp.gamma >= 0.0) || !std::isfinite(fp.omega)) throw InputError("invalid gamma or omega");
  if (!(fp.eta_a >= 0.0 && fp.eta_a <= 1.0 && fp.eta_b >= 0.0 && fp.eta_b <= 1.0)) {
    throw InputError("efficiencies must lie in [0, 1]");
  }
  if (!(fp.cfl > 0.0 && fp.cfl <= 0.5)) throw InputError("cfl must lie in (0, 0.5]");
}

double drift_a(double theta, const FpeParams& fp) {
  const double s = std::sin(theta), c = std::cos(theta);
  return -(fp.omega - 0.5 * fp.gamma * fp.eta_b * s + 0.5 * fp.gamma * fp.eta_a * c * s);
}

double noise_b(double theta, const FpeParams& fp) { return -std::sqrt(fp.gamma * fp.eta_a) * (1.0 + std::cos(theta)); }

double velocity(double theta, const FpeParams& fp) {
  return drift_a(theta, fp) - noise_b(theta, fp) * std::sqrt(fp.gamma * fp.eta_a) * std::sin(theta);
}

double sink(double theta, const FpeParams& fp) { return -0.5 * fp.gamma * fp.eta_b * (1.0 + std::cos(theta)); }

ThetaPdf fpe_evolve(const ThetaPdf& pdf, const FpeParams& fp, double t0, double t1, EvolveStats* stats) {
  validate(fp);
  if (!(t1 >= t0)) throw InputError("fpe_evolve: t1 < t0");
  if (pdf.size() < 8) throw InputError("fpe_evolve: grid too small");
  ThetaPdf out = pdf;
  out.time = pdf.time + (t1 - t0);
  if (t1 == t0) return out;

  Solver solver(fp, pdf.size());
  const double span = t1 - t0;
  const double bound = solver.advection_dt();
  const auto steps = bound > 0.0 ? static_cast<std::size_t>(std::ceil(span / bound - 1e-12)) : std::size_t{1};
  const double dt = span / static_cast<double>(steps);
  EvolveStats st;
  for (std::size_t k = 0; k < steps; ++k) {
    st.diffusion_substeps += solver.diffuse(out.values, 0.5 * dt);
    solver.advect(out.values, dt);
    out.clipped_mass += solver.clip(out.values);
    st.diffusion_substeps += solver.diffuse(out.values, 0.5 * dt);
    ++st.advection_steps;
  }
  if (stats) *stats = st;
  return out;
}

ThetaPdf characteristic_record_protocol(const FpeParams& fp, double tau, EvolveStats* stats) {
  validate(fp);
  if (!(tau >= 0.0)) throw InputError("tau must be non-negative");
  const ThetaPdf start = gaussian_init(fp.mu, fp.sigma, fp.n_grid);
  return normalize_pdf(fpe_evolve(start, fp, 0.0, tau, stats));
}

}  // namespace cfq::fpe
