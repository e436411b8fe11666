#include "polyball/lagrangian.hpp"

#include <cmath>

namespace polyball {

DeformationMap::DeformationMap(std::vector<double> z, std::vector<double> psi,
                               std::vector<double> dpsi)
    : curve_([&] {
        if (z.size() < 2) throw std::invalid_argument("deformation map needs nodes");
        for (std::size_t i = 0; i < z.size(); ++i)
          if (i > 0 && !(z[i] > z[i - 1]))
            throw std::domain_error("deformation map: nodes must increase");
        for (double d : dpsi)
          if (!(d > 0.0))
            throw std::domain_error("deformation map: psi' > 0 required");
        limit_monotone(z, psi, dpsi);
        return CubicHermite(std::move(z), std::move(psi), std::move(dpsi));
      }()) {}

DeformationMap euler_to_lagrange(const BallProfile& profile) {
  if (profile.samples.size() < 2)
    throw std::invalid_argument("euler_to_lagrange: profile has no samples");
  std::vector<double> z, psi, dpsi;
  z.reserve(profile.samples.size() + 1);
  psi.reserve(z.capacity());
  dpsi.reserve(z.capacity());
  // Center node: psi(0) = 0, psi'(0) = eta(0)^(-1/3) = delta_c^(-1/3).
  z.push_back(0.0);
  psi.push_back(0.0);
  dpsi.push_back(std::pow(profile.samples.front().eta, -1.0 / 3.0));
  double prev_z = 0.0;
  for (const auto& s : profile.samples) {
    const double zi = s.r * std::cbrt(s.eta);
    if (!(zi > prev_z))
      throw std::domain_error("euler_to_lagrange: phi(r) not strictly increasing");
    z.push_back(zi);
    psi.push_back(s.r);
    dpsi.push_back(std::pow(s.eta, 2.0 / 3.0) / s.delta);
    prev_z = zi;
  }
  return DeformationMap(std::move(z), std::move(psi), std::move(dpsi));
}

std::vector<EulerSample> lagrange_to_euler(const DeformationMap& map) {
  const auto& z = map.nodes();
  const auto& psi = map.values();
  const auto& dpsi = map.slopes();
  std::vector<EulerSample> out;
  out.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(dpsi[i] > 0.0))
      throw std::domain_error("lagrange_to_euler: psi' > 0 required");
    if (z[i] == 0.0) {
      const double d = 1.0 / (dpsi[i] * dpsi[i] * dpsi[i]);
      out.push_back({0.0, d, d});
    } else {
      const double ratio = z[i] / psi[i];
      out.push_back({psi[i], ratio * ratio / dpsi[i], ratio * ratio * ratio});
    }
  }
  return out;
}

std::optional<double> boundary_condition_residual(const DeformationMap& map,
                                                  const Material& mat) {
  const double yb = mat.boundary_shear();
  if (yb == 0.0) return std::nullopt;  // condition degenerates at zero shear
  const double Z = map.Z();
  return map.values().back() - yb * Z * map.slopes().back();
}

StretchPair stretches(const StrainState& s) {
  return {std::pow(s.eta, 2.0 / 3.0) / s.delta, std::pow(s.eta, -1.0 / 3.0)};
}

double deformation_velocity(const DeformationMap& map0, double omegadot, double z) {
  return omegadot * map0(z);
}

}  // namespace polyball
