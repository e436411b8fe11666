#ifndef POLYBALL_SRC_RADIAL_RUN_HPP
#define POLYBALL_SRC_RADIAL_RUN_HPP

#include <vector>

#include "polyball/radial_system.hpp"
#include "polyball/static_ball.hpp"

namespace polyball::detail {

/// Outcome of one center-to-boundary integration of a RadialSystem, shared by
/// the static and homologous solvers.
struct RadialRun {
  double r0 = 0.0;
  double horizon = 0.0;
  std::vector<ProfileSample> samples;
  double R = 0.0;
  double delta_R = 0.0, eta_R = 0.0;
  StopReason stop = StopReason::horizon;
  BallType type = BallType::none;
  bool warning = false;
  double R_max_hint = std::numeric_limits<double>::infinity();
  double y_end = std::numeric_limits<double>::quiet_NaN();
  std::size_t steps = 0;
  // Interior pressure positivity (a ball of matter requires p_tan > 0 inside;
  // collapsing profiles with y > 1 excursions can violate it).
  double min_F_tan = std::numeric_limits<double>::infinity();
  double F_scale = 0.0;
  bool boundary_found() const { return R > 0.0; }
  bool pressures_positive() const {
    return min_F_tan >= -1e-10 * std::max(1.0, F_scale);
  }
};

RadialRun run_radial(const RadialSystem& sys, double delta_c,
                     const SolveOptions& opts);

TypeVerdict classify_from(const RadialSystem& sys, double R, double delta_R,
                          double eta_R, double r_max, const SolveOptions& opts);

}  // namespace polyball::detail

#endif
