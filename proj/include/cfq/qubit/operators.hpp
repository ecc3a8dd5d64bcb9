#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cfq::qubit {

/// 2x2 complex matrix in the ordered basis {|e>, |g>}, with sigma_z|e> = +|e>.
/// Carries density operators (normalized or not), effects and operator
/// arguments of superoperators.
using QubitOperator = Eigen::Matrix2cd;
using Complex = std::complex<double>;

inline constexpr int kExcited = 0;
inline constexpr int kGround = 1;

QubitOperator identity();
QubitOperator sigma_minus();  ///< |g><e|
QubitOperator sigma_plus();   ///< |e><g|
QubitOperator sigma_x();
QubitOperator sigma_y();
QubitOperator sigma_z();
QubitOperator excited_projector();  ///< sigma_+ sigma_- = |e><e|
QubitOperator ground_projector();

/// J[sigma_-] rho = sigma_- rho sigma_+.
QubitOperator jump(const QubitOperator& rho);
/// Adjoint of J[sigma_-]: sigma_+ E sigma_-.
QubitOperator jump_adjoint(const QubitOperator& effect);

double trace(const QubitOperator& op);
/// Re Tr[op rho].
double expectation(const QubitOperator& rho, const QubitOperator& op);

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
};
/// Bloch components of rho / Tr rho.
BlochVector bloch(const QubitOperator& rho);

/// Throws ValidationError unless rho is Hermitian within 1e-12 (relative to
/// its trace) with eigenvalues >= -1e-10 (relative) and positive trace.
void validate_density(const QubitOperator& rho);
/// Throws ValidationError unless the effect is Hermitian and positive
/// semidefinite within 1e-10.
void validate_effect(const QubitOperator& effect);
bool is_hermitian(const QubitOperator& op, double tol);
/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const QubitOperator& op);

}  // namespace cfq::qubit
