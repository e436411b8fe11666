#ifndef POLYBALL_HOMOLOGOUS_HPP
#define POLYBALL_HOMOLOGOUS_HPP

#include <vector>

#include "polyball/interp.hpp"
#include "polyball/static_ball.hpp"

namespace polyball {

/// Parameters of the homologous ansatz; the separation of variables fixes
/// gamma = 4/3.
struct HomologousParams {
  Material mat;
  double alpha = -1.0;   // separation constant; > 0 expansion, < 0 collapse
  double delta0_c = 1.0; // central profile value

  static HomologousParams make(const Material& mat, double alpha, double delta0_c);

  /// Coefficient of the scale-factor equation omega^2 omega'' = c_omega alpha,
  /// equal to 3 theta (1-nu)/(1+nu) in kappa = K = 1 units.
  double c_omega() const { return 3.0 * mat.theta * mat.cnu(); }
};

struct OmegaSample {
  double t, omega, omegadot;
};

struct OmegaTrajectory {
  std::vector<OmegaSample> samples;
  double collapse_time = 0.0;  // 0 when no collapse happened within t_end
  double energy_drift = 0.0;   // max energy-integral drift, locally normalized
  double c_omega = 0.0;
  double alpha = 0.0;
  bool has_collapse() const { return collapse_time > 0.0; }
};

/// Integrate omega'' = c_omega alpha / omega^2 from omega(0)=1, omega'(0)=0.
/// For alpha < 0 the collapse time T (omega -> 0) is located by an event at
/// omega = 1e-8 and square-root extrapolation; t_end = 0 picks a horizon that
/// contains it.
OmegaTrajectory solve_omega(const HomologousParams& p, double t_end = 0.0,
                            const SolveOptions& opts = {});

/// Self-similar profile (delta0, eta0) with boundary y0(Z) = y_b.
struct SelfSimilarProfile {
  HomologousParams params;
  double z0 = 0.0;
  std::vector<ProfileSample> samples;  // r holds z, delta/eta hold delta0/eta0
  double Z = 0.0;
  BallType type = BallType::none;
  bool type_warning = false;
  double Z_max_hint = std::numeric_limits<double>::infinity();
  double horizon = 0.0;
  StopReason stop = StopReason::horizon;
  double delta_Z = 0.0, eta_Z = 0.0;
  std::size_t steps = 0;
  double min_F_tan = std::numeric_limits<double>::infinity();
  double F_scale = 0.0;
  bool boundary_found() const { return Z > 0.0; }
  /// Interior tangential pressure stayed positive (ball-of-matter condition;
  /// collapsing profiles with y > 1 excursions violate it).
  bool pressures_positive() const {
    return min_F_tan >= -1e-10 * std::max(1.0, F_scale);
  }
};

SelfSimilarProfile integrate_profile(const HomologousParams& p,
                                     const SolveOptions& opts = {});

/// Time-parametrized homologous ball assembled from the scale factor and the
/// self-similar profile.  Evaluators return vacuum zeros outside r = R(t).
class HomologousBall {
 public:
  HomologousBall(const OmegaTrajectory& traj, const SelfSimilarProfile& prof);

  double omega(double t) const { return omega_(t); }
  double omegadot(double t) const { return omegadot_(t); }
  double radius(double t) const { return prof_.Z * omega_(t); }
  double collapse_time() const { return traj_.collapse_time; }
  double boundary_Z() const { return prof_.Z; }
  double total_mass() const;

  double density(double t, double r) const;
  double velocity(double t, double r) const;
  PressurePair pressures(double t, double r) const;

  const SelfSimilarProfile& profile() const { return prof_; }

 private:
  OmegaTrajectory traj_;
  SelfSimilarProfile prof_;
  CubicHermite omega_, omegadot_, delta0_, eta0_;
};

HomologousBall assemble_solution(const OmegaTrajectory& traj,
                                 const SelfSimilarProfile& prof);

/// Existence threshold delta_star(alpha, nu) for collapsing zero-boundary-
/// shear balls (beta = 4 (1-nu)/(1+nu)): bisects the central density on the
/// "boundary found within horizon" predicate to relative width rel_tol.
double find_threshold(double alpha, double nu, double theta, double bracket_lo,
                      double bracket_hi, double rel_tol = 1e-3,
                      const SolveOptions& opts = {});

}  // namespace polyball

#endif
