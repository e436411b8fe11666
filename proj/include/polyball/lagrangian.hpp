#ifndef POLYBALL_LAGRANGIAN_HPP
#define POLYBALL_LAGRANGIAN_HPP

#include <optional>
#include <vector>

#include "polyball/interp.hpp"
#include "polyball/static_ball.hpp"

namespace polyball {

/// Radial configuration map psi: [0,Z] -> [0,R], the inverse of
/// phi(r) = (eta r^3)^(1/3).  Node derivatives are exact,
/// psi'(z) = eta^(2/3)/delta, so node evaluations carry no interpolation
/// error; between nodes a monotonicity-limited cubic Hermite is used.
class DeformationMap {
 public:
  DeformationMap(std::vector<double> z, std::vector<double> psi,
                 std::vector<double> dpsi);

  double Z() const { return curve_.back_x(); }
  double R() const { return curve_.ys().back(); }
  double operator()(double z) const { return curve_(z); }
  double derivative(double z) const { return curve_.derivative(z); }

  const std::vector<double>& nodes() const { return curve_.xs(); }
  const std::vector<double>& values() const { return curve_.ys(); }
  const std::vector<double>& slopes() const { return curve_.ds(); }

  /// psi'(0) by extrapolation to the center (equals delta_c^(-1/3); 1 for
  /// unit central density).
  double center_slope() const { return curve_.ds().front(); }

 private:
  CubicHermite curve_;
};

/// Build the Lagrangian configuration map from a solved Eulerian profile.
/// Throws if phi(r) = (eta r^3)^(1/3) fails to increase strictly (corrupted
/// profile).
DeformationMap euler_to_lagrange(const BallProfile& profile);

struct EulerSample {
  double r, delta, eta;
};

/// Invert the map back to Eulerian fields at its nodes:
/// delta = z^2/(psi^2 psi'), eta = (z/psi)^3 at r = psi(z).
std::vector<EulerSample> lagrange_to_euler(const DeformationMap& map);

/// Constant-boundary-shear condition psi(Z) - y_b Z psi'(Z).  Not applicable
/// (nullopt) for y_b = 0, where the condition degenerates.
std::optional<double> boundary_condition_residual(const DeformationMap& map,
                                                  const Material& mat);

struct StretchPair {
  double lambda1, lambda2;
};

/// Principal stretches lambda1 = eta^(2/3)/delta (radial),
/// lambda2 = eta^(-1/3) (tangential); y = lambda2/lambda1.
StretchPair stretches(const StrainState& s);

/// Homologous velocity transport: psi_t(z) = omega(t) psi0(z), so
/// d psi/dt = omegadot * psi0(z).
double deformation_velocity(const DeformationMap& map0, double omegadot, double z);

}  // namespace polyball

#endif
