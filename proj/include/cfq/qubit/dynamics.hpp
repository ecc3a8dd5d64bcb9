#pragma once

#include <cstddef>
#include <vector>

#include "cfq/qubit/operators.hpp"
#include "cfq/qubit/params.hpp"

namespace cfq::qubit {

/// H = (omega / 2) sigma_x (interaction frame, resonant drive).
QubitOperator hamiltonian(const SimParams& p);
/// H_eff = H - (i gamma / 2) sigma_+ sigma_-.
QubitOperator effective_hamiltonian(const SimParams& p);

/// L rho = gamma J[sigma_-] rho - i (H_eff rho - rho H_eff^dagger).
QubitOperator lindblad_generator(const QubitOperator& rho, const SimParams& p);
/// Hilbert-Schmidt adjoint of lindblad_generator.
QubitOperator lindblad_adjoint_generator(const QubitOperator& effect, const SimParams& p);

/// Classical fourth-order Runge-Kutta step of dx/dt = gen(x) for a linear,
/// time-independent generator. For such generators the step equals the
/// degree-4 Taylor polynomial of exp(gen dt), so the step built from the
/// adjoint generator is exactly the adjoint map.
template <class Generator>
QubitOperator rk4_step(const Generator& gen, const QubitOperator& x, double dt) {
  const QubitOperator k1 = gen(x);
  const QubitOperator k2 = gen(x + 0.5 * dt * k1);
  const QubitOperator k3 = gen(x + 0.5 * dt * k2);
  const QubitOperator k4 = gen(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Unconditioned master-equation step, fourth order. Throws ValidationError
/// for non-Hermitian input.
QubitOperator lindblad_step(const QubitOperator& rho, const SimParams& p, double dt);

/// States rho(k dt), k = 0..n_steps, from repeated lindblad_step.
std::vector<QubitOperator> lindblad_solution(const QubitOperator& rho0, const SimParams& p, double dt,
                                             std::size_t n_steps);

/// Alice photon-counting filter, unnormalized, first order in dt:
///   click:    gamma eta_a dt J[sigma_-] rho
///   no click: {1 + (L - gamma eta_a J[sigma_-]) dt} rho
/// The two branches sum to (1 + L dt) rho, so traces are record
/// probabilities. Throws UnderflowError when Tr rho < 1e-300.
QubitOperator jump_filter_step(const QubitOperator& rho, bool clicked, const SimParams& p, double dt);

/// Linear Y-homodyne update (Euler-Maruyama):
///   rho + dt L rho + sqrt(eta_a gamma) dW (i sigma_- rho - i rho sigma_+).
/// With dW drawn as a standard Wiener increment this is the ostensible
/// (linear) trajectory; for a physical path pass dW_phys + sqrt(eta_a gamma) <sigma_y> dt.
QubitOperator homodyne_filter_step(const QubitOperator& rho, double dW, const SimParams& p, double dt);

/// Y_t = Tr[rho sigma_y] + dW / (sqrt(eta_a gamma) dt), rho normalized and dW
/// the physical innovation. Throws InputError when eta_a gamma == 0.
double homodyne_current(const QubitOperator& rho, double dW, const SimParams& p, double dt);

}  // namespace cfq::qubit
