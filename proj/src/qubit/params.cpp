#include "cfq/qubit/params.hpp"

#include <cmath>
#include <limits>

#include "cfq/error.hpp"

namespace cfq::qubit {

double SimParams::omega_prime() const {
  const double d = omega * omega - 0.25 * gamma * gamma;
  return d > 0.0 ? std::sqrt(d) : std::numeric_limits<double>::quiet_NaN();
}

std::size_t SimParams::steps() const { return static_cast<std::size_t>(std::llround(t_final / dt)); }

void validate(const SimParams& p) {
  if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma)) throw InputError("gamma must be a non-negative number");
  if (!std::isfinite(p.omega)) throw InputError("omega must be finite");
  if (!(p.eta_a >= 0.0 && p.eta_a <= 1.0)) throw InputError("eta_a must lie in [0, 1]");
  if (!(p.eta_b >= 0.0 && p.eta_b <= 1.0)) throw InputError("eta_b must lie in [0, 1]");
  if (std::abs(p.eta_a + p.eta_b - 1.0) > 1e-12) throw InputError("eta_a + eta_b must equal 1");
  if (!(p.dt > 0.0)) throw InputError("dt must be positive");
  if (!(p.t_final > 0.0)) throw InputError("t_final must be positive");
}

}  // namespace cfq::qubit
