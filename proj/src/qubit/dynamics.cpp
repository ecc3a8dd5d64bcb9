#include "cfq/qubit/dynamics.hpp"

#include <cmath>

#include "cfq/error.hpp"

namespace cfq::qubit {

namespace {
const Complex I(0.0, 1.0);
}

QubitOperator hamiltonian(const SimParams& p) { return 0.5 * p.omega * sigma_x(); }

QubitOperator effective_hamiltonian(const SimParams& p) {
  return hamiltonian(p) - I * (0.5 * p.gamma) * excited_projector();
}

QubitOperator lindblad_generator(const QubitOperator& rho, const SimParams& p) {
  const QubitOperator h = effective_hamiltonian(p);
  return p.gamma * jump(rho) - I * (h * rho - rho * h.adjoint());
}

QubitOperator lindblad_adjoint_generator(const QubitOperator& effect, const SimParams& p) {
  const QubitOperator h = effective_hamiltonian(p);
  return p.gamma * jump_adjoint(effect) + I * (h.adjoint() * effect - effect * h);
}

QubitOperator lindblad_step(const QubitOperator& rho, const SimParams& p, double dt) {
  if (!rho.allFinite() || !is_hermitian(rho, 1e-12 * std::max(1.0, std::abs(trace(rho))))) {
    throw ValidationError("lindblad_step: input is not Hermitian");
  }
  return rk4_step([&](const QubitOperator& x) { return lindblad_generator(x, p); }, rho, dt);
}

std::vector<QubitOperator> lindblad_solution(const QubitOperator& rho0, const SimParams& p, double dt,
                                             std::size_t n_steps) {
  std::vector<QubitOperator> out;
  out.reserve(n_steps + 1);
  out.push_back(rho0);
  for (std::size_t k = 0; k < n_steps; ++k) out.push_back(lindblad_step(out.back(), p, dt));
  return out;
}

QubitOperator jump_filter_step(const QubitOperator& rho, bool clicked, const SimParams& p, double dt) {
  if (!(std::abs(trace(rho)) >= 1e-300)) throw UnderflowError("jump_filter_step: trace below 1e-300");
  if (clicked) return (p.kappa_a() * dt) * jump(rho);
  return rho + dt * (lindblad_generator(rho, p) - p.kappa_a() * jump(rho));
}

QubitOperator homodyne_filter_step(const QubitOperator& rho, double dW, const SimParams& p, double dt) {
  if (!std::isfinite(dW)) throw InputError("homodyne_filter_step: non-finite Wiener increment");
  if (!(std::abs(trace(rho)) >= 1e-300)) throw UnderflowError("homodyne_filter_step: trace below 1e-300");
  const QubitOperator c = I * sigma_minus();
  return rho + dt * lindblad_generator(rho, p) + std::sqrt(p.kappa_a()) * dW * (c * rho + rho * c.adjoint());
}

double homodyne_current(const QubitOperator& rho, double dW, const SimParams& p, double dt) {
  const double k = p.kappa_a();
  if (!(k > 0.0)) throw InputError("homodyne current is undefined when eta_a * gamma = 0");
  return expectation(rho, sigma_y()) + dW / (std::sqrt(k) * dt);
}

}  // namespace cfq::qubit
