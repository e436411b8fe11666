#ifndef POLYBALL_RADIAL_SYSTEM_HPP
#define POLYBALL_RADIAL_SYSTEM_HPP

#include <cmath>
#include <limits>

#include "polyball/constitutive.hpp"
#include "polyball/material.hpp"
#include "polyball/ode.hpp"

namespace polyball {

/// Radial ODE system on (delta, eta), covering both the static equilibrium
/// equations (alpha = 0) and the self-similar homologous profile equations
/// (gamma = 4/3, alpha the separation constant):
///
///   delta' = y^(1-beta) [ 3(beta-gamma) B(y) eta / r
///                         - theta r eta^(2-gamma) delta (1 + alpha/eta) ]
///   eta'   = -3 (eta - delta) / r
///
/// For beta > 1 the state is carried in the chart w = delta^beta, whose
/// derivative stays bounded as delta -> 0.
struct RadialSystem {
  Material mat;
  double alpha = 0.0;

  explicit RadialSystem(const Material& m, double a = 0.0) : mat(m), alpha(a) {}

  bool w_chart() const { return mat.beta > 1.0; }

  double encode(double delta) const {
    return w_chart() ? std::pow(delta, mat.beta) : delta;
  }
  double decode(double w) const {
    return w_chart() ? std::pow(w, 1.0 / mat.beta) : w;
  }

  void operator()(double r, const ode::State<2>& s, ode::State<2>& ds) const {
    const double eta = s[1];
    const double delta = decode(s[0]);
    if (!(delta > 0.0) || !(eta > 0.0) || !std::isfinite(delta) || !std::isfinite(eta)) {
      ds[0] = ds[1] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const double y = delta / eta;
    const double b = mat.beta, g = mat.gamma;
    const double grav_factor = 1.0 + alpha / eta;
    if (w_chart()) {
      ds[0] = b * (3.0 * (b - g) * B_func_raw(b, y) * std::pow(eta, b) / r -
                   mat.theta * r * std::pow(eta, 1.0 + b - g) * delta * grav_factor);
    } else {
      ds[0] = std::pow(y, 1.0 - b) *
              (3.0 * (b - g) * B_func_raw(b, y) * eta / r -
               mat.theta * r * std::pow(eta, 2.0 - g) * delta * grav_factor);
    }
    ds[1] = -3.0 * (eta - delta) / r;
  }

  /// delta''(0) = -theta delta_c^(3-gamma) (1 + alpha/delta_c); eta''(0) is
  /// 3/5 of it (strongly regular center).
  double center_curvature(double delta_c) const {
    return -mat.theta * std::pow(delta_c, 3.0 - mat.gamma) * (1.0 + alpha / delta_c);
  }

  /// Series-start radius: the quadratic correction at r0 is ~1e-8 of delta_c,
  /// keeping the O(r^4) truncation below integrator tolerance.
  double start_radius(double delta_c) const {
    double curv = std::abs(center_curvature(delta_c)) / delta_c;
    if (!(curv > 0.0)) curv = mat.theta * std::pow(delta_c, 2.0 - mat.gamma);
    return 1e-4 / std::sqrt(curv);
  }

  /// Natural radial scale used for the integration horizon.
  double radial_scale(double delta_c) const {
    return 1e4 * start_radius(delta_c);
  }

  /// Taylor start at r0: delta = delta_c + d2/2 r0^2, eta = delta_c + 3 d2/10 r0^2.
  void series_start(double delta_c, double r0, double& delta, double& eta) const {
    const double d2 = center_curvature(delta_c);
    delta = delta_c + 0.5 * d2 * r0 * r0;
    eta = delta_c + 0.3 * d2 * r0 * r0;
  }

  /// dy/dxi and dv/dxi of the associated autonomous phase system, used for
  /// stall detection (xi = log r, v = theta r^2 eta^(2-gamma) y^(1-beta)).
  void phase_rates(double r, const ode::State<2>& s, double& dy_dxi,
                   double& dv_dxi, double& v) const {
    ode::State<2> ds;
    (*this)(r, s, ds);
    const double eta = s[1];
    const double delta = decode(s[0]);
    const double y = delta / eta;
    const double ddelta = w_chart() ? ds[0] * std::pow(delta, 1.0 - mat.beta) / mat.beta
                                    : ds[0];
    const double dy_dr = (ddelta * eta - delta * ds[1]) / (eta * eta);
    dy_dxi = r * dy_dr;
    v = mat.theta * r * r * std::pow(eta, 2.0 - mat.gamma) *
        std::pow(y, 1.0 - mat.beta);
    dv_dxi = v * (2.0 + (2.0 - mat.gamma) * r * ds[1] / eta + (1.0 - mat.beta) * dy_dxi / y);
  }
};

}  // namespace polyball

#endif
