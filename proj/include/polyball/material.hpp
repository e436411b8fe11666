#ifndef POLYBALL_MATERIAL_HPP
#define POLYBALL_MATERIAL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace polyball {

/// (1-nu)/(1+nu), the Poisson factor entering every constitutive expression.
inline double poisson_factor(double nu) { return (1.0 - nu) / (1.0 + nu); }

/// Closed-form branches switch to their logarithmic limit when the exponent
/// is within this distance of the pole (beta=1 or gamma=1).
inline constexpr double kBranchEpsilon = 1e-7;

/// Tolerance used by all inequality checkers on kappa-normalized quantities.
inline constexpr double kInequalityTol = 1e-10;

/// Polytropic elastic material: bulk modulus kappa, Poisson ratio nu in
/// (-1,1/2], polytropic exponent gamma > 0 and shear exponent beta != 0
/// subject to beta <= 3*gamma*(1-nu)/(1+nu).  theta is the nondimensional
/// gravitational coupling, a free positive input in kappa = K = 1 units.
struct Material {
  double kappa = 1.0;
  double nu = 0.25;
  double gamma = 2.0;
  double beta = 2.0;
  double theta = 1.0;

  /// Validating factory; throws std::domain_error on inadmissible parameters.
  static Material make(double kappa, double nu, double gamma, double beta,
                       double theta = 1.0);

  double cnu() const { return poisson_factor(nu); }

  /// Largest admissible shear exponent, 3*gamma*(1-nu)/(1+nu).
  double beta_admissible_max() const { return 3.0 * gamma * cnu(); }

  /// y_b^beta = 1 - beta/(3*gamma) * (1+nu)/(1-nu), kept in closed form so the
  /// constant-boundary-shear identity holds to rounding.
  double yb_pow_beta() const { return 1.0 - beta / (3.0 * gamma * cnu()); }

  /// Boundary shear y_b in [0,1).
  double boundary_shear() const {
    double p = yb_pow_beta();
    if (p <= 0.0) return 0.0;
    return std::pow(p, 1.0 / beta);
  }

  bool zero_boundary_shear() const { return yb_pow_beta() <= 1e-14; }

  /// Reference pressure kappa/gamma = -p_rad(y_b, 1).
  double reference_pressure() const { return kappa / gamma; }

  /// Fluid limit: nu = 1/2 and beta = gamma (isotropic pressure).
  bool is_fluid() const {
    return std::abs(nu - 0.5) < 1e-14 && std::abs(beta - gamma) < 1e-14;
  }
};

inline Material Material::make(double kappa, double nu, double gamma,
                               double beta, double theta) {
  if (!(kappa > 0.0)) throw std::domain_error("material: kappa must be positive");
  if (!(nu > -1.0 && nu <= 0.5))
    throw std::domain_error("material: nu must lie in (-1, 1/2]");
  if (!(gamma > 0.0)) throw std::domain_error("material: gamma must be positive");
  if (beta == 0.0) throw std::domain_error("material: beta != 0 required");
  if (!(theta > 0.0)) throw std::domain_error("material: theta must be positive");
  Material m{kappa, nu, gamma, beta, theta};
  // Admissibility: a small slack admits the zero-boundary-shear line itself.
  if (beta > m.beta_admissible_max() * (1.0 + 1e-12))
    throw std::domain_error(
        "material: inadmissible shear exponent, beta <= 3*gamma*(1-nu)/(1+nu) "
        "required (beta_max = " + std::to_string(m.beta_admissible_max()) + ")");
  return m;
}

/// A point of the Eulerian configuration space: normalized density delta,
/// normalized mean density eta, and the shear y = delta/eta.
struct StrainState {
  double delta;
  double eta;
  double y;

  StrainState(double delta_, double eta_) : delta(delta_), eta(eta_), y(delta_ / eta_) {
    if (!(delta > 0.0) || !(eta > 0.0))
      throw std::domain_error("strain state requires delta > 0 and eta > 0");
  }
};

}  // namespace polyball

#endif
