#ifndef POLYBALL_STATIC_BALL_HPP
#define POLYBALL_STATIC_BALL_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "polyball/constitutive.hpp"
#include "polyball/material.hpp"

namespace polyball {

struct CenterData {
  double delta_c = 1.0;
};

struct SolveOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double r_max = 0.0;        // integration horizon; 0 -> 1e3 in rescaled units
  // Post-boundary horizon for the A/B continuation.  Convergence to the sink
  // is a power law in r, so this must sit far beyond the main horizon;
  // 0 -> 1e10 in rescaled units.
  double classify_r_max = 0.0;
  double delta_floor = 1e-12;
  std::size_t max_steps = 2'000'000;
  bool classify = true;      // continue past the boundary to tag type A/B
  bool record = true;        // keep per-step profile samples
  double y_converged_tol = 1e-4;  // type-B early stop on |y - y_P| + phase rates
  double stall_tol = 1e-11;  // combined phase-rate threshold for stalling
};

enum class BallType { none, type_a, type_b };

enum class StopReason {
  boundary_shear,   // y crossed y_b
  density_floor,    // delta reached the floor (zero-boundary-shear boundary)
  horizon,          // r_max reached without a boundary
  stalled,          // phase rates vanished above y_b (censored nonexistence)
  solver_failure    // step underflow or step budget exhausted
};

struct ProfileSample {
  double r, delta, eta, y, F_rad, F_tan, mass;
};

struct BallProfile {
  Material mat;
  double delta_c = 1.0;
  double r0 = 0.0;  // series-start radius
  std::vector<ProfileSample> samples;

  double R = 0.0;  // ball radius; 0 when no boundary was found
  BallType type = BallType::none;
  bool type_warning = false;  // horizon reached while y was still drifting
  double R_max_hint = std::numeric_limits<double>::infinity();
  double y_infinity = std::numeric_limits<double>::quiet_NaN();
  double horizon = 0.0;

  StopReason stop = StopReason::horizon;
  std::size_t steps = 0;
  double min_F_tan = std::numeric_limits<double>::infinity();
  double F_scale = 0.0;

  bool boundary_found() const { return R > 0.0; }
  /// Interior tangential pressure stayed positive (ball-of-matter condition).
  bool pressures_positive() const {
    return min_F_tan >= -1e-10 * std::max(1.0, F_scale);
  }
  // Boundary state (valid when a boundary was found).
  double delta_R = 0.0, eta_R = 0.0;
};

/// Taylor expansion of the strongly regular center evaluated at r0.
StrainState series_start(const CenterData& c, const Material& mat, double r0);

/// Integrate the static self-gravity system from the center, stop at the
/// first radius with y = y_b (or at the density floor when y_b = 0), and
/// classify the underlying solution as type A or B.
BallProfile integrate_static(const CenterData& c, const Material& mat,
                             const SolveOptions& opts = {});

struct TypeVerdict {
  BallType type = BallType::none;
  bool warning = false;
  double R_max_hint = std::numeric_limits<double>::infinity();
  double y_infinity = std::numeric_limits<double>::quiet_NaN();
};

/// Continue the underlying strongly regular solution beyond the ball boundary:
/// type A when the density reaches the floor at finite radius, type B when the
/// horizon is reached with y settled (warning when y is still drifting).
TypeVerdict classify_type(const BallProfile& profile, const Material& mat,
                          const SolveOptions& opts = {});

/// Sink shear of the phase flow, y_P = (4-3 gamma)/(3(2-gamma)).
double y_sink(double gamma);

}  // namespace polyball

#endif
