#include "cfq/qubit/operators.hpp"

#include <algorithm>
#include <cmath>

#include "cfq/error.hpp"

namespace cfq::qubit {

namespace {
const Complex I(0.0, 1.0);
}

QubitOperator identity() { return QubitOperator::Identity(); }

QubitOperator sigma_minus() {
  QubitOperator m = QubitOperator::Zero();
  m(kGround, kExcited) = 1.0;
  return m;
}

QubitOperator sigma_plus() {
  QubitOperator m = QubitOperator::Zero();
  m(kExcited, kGround) = 1.0;
  return m;
}

QubitOperator sigma_x() {
  QubitOperator m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

QubitOperator sigma_y() {
  QubitOperator m;
  m << 0.0, -I, I, 0.0;
  return m;
}

QubitOperator sigma_z() {
  QubitOperator m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

QubitOperator excited_projector() {
  QubitOperator m = QubitOperator::Zero();
  m(kExcited, kExcited) = 1.0;
  return m;
}

QubitOperator ground_projector() {
  QubitOperator m = QubitOperator::Zero();
  m(kGround, kGround) = 1.0;
  return m;
}

QubitOperator jump(const QubitOperator& rho) {
  QubitOperator out = QubitOperator::Zero();
  out(kGround, kGround) = rho(kExcited, kExcited);
  return out;
}

QubitOperator jump_adjoint(const QubitOperator& effect) {
  QubitOperator out = QubitOperator::Zero();
  out(kExcited, kExcited) = effect(kGround, kGround);
  return out;
}

double trace(const QubitOperator& op) { return op.trace().real(); }

double expectation(const QubitOperator& rho, const QubitOperator& op) { return (op * rho).trace().real(); }

BlochVector bloch(const QubitOperator& rho) {
  const double tr = trace(rho);
  // Tr[sigma_x rho] = 2 Re rho_ge, Tr[sigma_y rho] = 2 Im rho_ge, Tr[sigma_z rho] = rho_ee - rho_gg
  const Complex ge = rho(kGround, kExcited);
  return {2.0 * ge.real() / tr, 2.0 * ge.imag() / tr, (rho(kExcited, kExcited) - rho(kGround, kGround)).real() / tr};
}

bool is_hermitian(const QubitOperator& op, double tol) { return (op - op.adjoint()).cwiseAbs().maxCoeff() <= tol; }

double min_eigenvalue(const QubitOperator& op) {
  const QubitOperator h = 0.5 * (op + op.adjoint());
  const double a = h(0, 0).real(), d = h(1, 1).real();
  const double b = std::abs(h(0, 1));
  return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
}

void validate_density(const QubitOperator& rho) {
  if (!rho.allFinite()) throw ValidationError("density operator has non-finite entries");
  const double tr = trace(rho);
  if (!(tr > 0.0)) throw ValidationError("density operator has non-positive trace");
  if (!is_hermitian(rho, 1e-12 * tr)) throw ValidationError("density operator is not Hermitian");
  if (min_eigenvalue(rho) < -1e-10 * tr) throw ValidationError("density operator has a negative eigenvalue");
}

void validate_effect(const QubitOperator& effect) {
  if (!effect.allFinite()) throw ValidationError("effect has non-finite entries");
  const double scale = std::max(1.0, effect.cwiseAbs().maxCoeff());
  if (!is_hermitian(effect, 1e-10 * scale)) throw ValidationError("effect is not Hermitian");
  if (min_eigenvalue(effect) < -1e-10 * scale) throw ValidationError("effect is not positive semidefinite");
}

}  // namespace cfq::qubit
