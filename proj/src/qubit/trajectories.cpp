#include "cfq/qubit/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cfq/error.hpp"
#include "cfq/parallel.hpp"
#include "cfq/qubit/dynamics.hpp"

namespace cfq::qubit {

namespace {

const Complex I(0.0, 1.0);

QubitOperator normalized(const QubitOperator& rho) {
  const double tr = trace(rho);
  if (!(tr > 1e-300)) throw UnderflowError("trajectory state lost its trace");
  return rho * (1.0 / tr);
}

QubitOperator jump_no_click(const QubitOperator& rho, const SimParams& p, double dt) {
  return rk4_step(
      [&](const QubitOperator& x) { return lindblad_generator(x, p) - p.kappa_a() * jump(x); }, rho, dt);
}

std::size_t grid_points(const SimParams& p, std::size_t stride) {
  if (stride == 0) throw InputError("output stride must be positive");
  return p.steps() / stride + 1;
}

BlochStatistics reduce(const SimParams& p, std::size_t stride, const std::vector<std::vector<QubitOperator>>& paths) {
  BlochStatistics out;
  const std::size_t m = grid_points(p, stride);
  out.n_paths = paths.size();
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (auto& v : out.mean) v.assign(m, 0.0);
  for (auto& v : out.stderr_) v.assign(m, 0.0);
  out.t.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.t[j] = static_cast<double>(j * stride) * p.dt;

  const double n = static_cast<double>(paths.size());
  for (std::size_t j = 0; j < m; ++j) {
    std::array<double, 3> sum{}, sq{};
    for (const auto& path : paths) {
      out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(path[j]));
      const BlochVector b = bloch(path[j]);
      const std::array<double, 3> c{b.x, b.y, b.z};
      for (int a = 0; a < 3; ++a) {
        sum[a] += c[a];
        sq[a] += c[a] * c[a];
      }
    }
    for (int a = 0; a < 3; ++a) {
      const double mean = sum[a] / n;
      const double var = n > 1 ? std::max(0.0, (sq[a] - n * mean * mean) / (n - 1.0)) : 0.0;
      out.mean[a][j] = mean;
      out.stderr_[a][j] = std::sqrt(var / n);
    }
  }
  return out;
}

}  // namespace

FilteredTrajectory filter_jump_record(const ClickRecord& record, const SimParams& p, const QubitOperator& rho0) {
  validate(p);
  const std::size_t n = p.steps();
  record.validate(0.0, static_cast<double>(n) * p.dt);
  const std::vector<int> clicks = align_to_grid(record, 0.0, p.dt, n);

  FilteredTrajectory out;
  out.dt = p.dt;
  out.states.reserve(n + 1);
  out.log_density.reserve(n + 1);
  out.states.push_back(normalized(rho0));
  out.log_density.push_back(std::log(trace(rho0)));
  for (std::size_t k = 0; k < n; ++k) {
    const QubitOperator& rho = out.states.back();
    double log_d = out.log_density.back();
    QubitOperator next;
    if (clicks[k] > 0) {
      // A second click in the same step finds the atom in |g>: zero density.
      const double ee = std::real(rho(kExcited, kExcited));
      log_d += std::log(p.kappa_a() * ee) + (clicks[k] > 1 ? -std::numeric_limits<double>::infinity() : 0.0);
      next = ground_projector();
    } else {
      const QubitOperator raw = jump_no_click(rho, p, p.dt);
      log_d += std::log(trace(raw));
      next = normalized(raw);
    }
    out.states.push_back(next);
    out.log_density.push_back(log_d);
  }
  return out;
}

QubitOperator homodyne_trajectory_step(const QubitOperator& rho, double dW, const SimParams& p, double dt) {
  if (!std::isfinite(dW)) throw InputError("homodyne_trajectory_step: non-finite Wiener increment");
  const double k = p.kappa_a();
  const double dy = dW + std::sqrt(k) * expectation(rho, sigma_y()) * dt;
  const QubitOperator c = I * sigma_minus();
  const QubitOperator m = identity() - I * dt * effective_hamiltonian(p) + std::sqrt(k) * dy * c;
  return normalized(m * rho * m.adjoint() + ((p.gamma - k) * dt) * jump(rho));
}

ClickRecord sample_jump_record(const SimParams& p, rng::Engine& g, std::size_t stride,
                               std::vector<QubitOperator>* states) {
  validate(p);
  const std::size_t n = p.steps();
  ClickRecord record;
  QubitOperator rho = ground_projector();
  if (states) {
    states->clear();
    states->push_back(rho);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double pc = p.kappa_a() * p.dt * std::real(rho(kExcited, kExcited));
    if (rng::uniform_open0(g) <= pc) {
      record.times.push_back(static_cast<double>(k) * p.dt);
      rho = ground_projector();
    } else {
      rho = normalized(jump_no_click(rho, p, p.dt));
    }
    if (states && (k + 1) % stride == 0) states->push_back(rho);
  }
  return record;
}

HomodynePath sample_homodyne_path(const SimParams& p, rng::Engine& g, std::size_t stride,
                                  std::vector<QubitOperator>* states) {
  validate(p);
  const std::size_t n = p.steps();
  HomodynePath path;
  path.dt = p.dt;
  path.dW.reserve(n);
  path.current.reserve(n);
  std::normal_distribution<double> normal(0.0, std::sqrt(p.dt));
  QubitOperator rho = ground_projector();
  if (states) {
    states->clear();
    states->push_back(rho);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double dW = normal(g);
    path.dW.push_back(dW);
    path.current.push_back(p.kappa_a() > 0.0 ? homodyne_current(rho, dW, p, p.dt)
                                             : std::numeric_limits<double>::quiet_NaN());
    rho = homodyne_trajectory_step(rho, dW, p, p.dt);
    if (states && (k + 1) % stride == 0) states->push_back(rho);
  }
  return path;
}

BlochStatistics average_jump_trajectories(const SimParams& p, std::size_t n_paths, std::size_t stride) {
  grid_points(p, stride);
  std::vector<std::vector<QubitOperator>> paths(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    rng::Engine g = rng::stream(p.seed, "jump-trajectory", i);
    sample_jump_record(p, g, stride, &paths[i]);
  });
  return reduce(p, stride, paths);
}

BlochStatistics average_homodyne_trajectories(const SimParams& p, std::size_t n_paths, std::size_t stride) {
  grid_points(p, stride);
  std::vector<std::vector<QubitOperator>> paths(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    rng::Engine g = rng::stream(p.seed, "homodyne-trajectory", i);
    sample_homodyne_path(p, g, stride, &paths[i]);
  });
  return reduce(p, stride, paths);
}

BlochStatistics lindblad_reference(const SimParams& p, std::size_t stride) {
  validate(p);
  const std::size_t m = grid_points(p, stride);
  std::vector<QubitOperator> path;
  path.reserve(m);
  QubitOperator rho = ground_projector();
  path.push_back(rho);
  for (std::size_t k = 0; k < p.steps(); ++k) {
    rho = lindblad_step(rho, p, p.dt);
    if ((k + 1) % stride == 0) path.push_back(rho);
  }
  return reduce(p, stride, {path});
}

}  // namespace cfq::qubit
