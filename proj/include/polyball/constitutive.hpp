#ifndef POLYBALL_CONSTITUTIVE_HPP
#define POLYBALL_CONSTITUTIVE_HPP

#include <cstdint>
#include <utility>

#include "polyball/material.hpp"

namespace polyball {

struct PressurePair {
  double rad;
  double tan;
};

/// Scalar shear map S(y) on (0,inf) with derivative access.  The canonical
/// instance is the power-law closed form with its beta=1 logarithmic branch.
class ShearFunction {
 public:
  virtual ~ShearFunction() = default;
  virtual double value(double y) const = 0;
  virtual double derivative(double y) const = 0;
};

/// Canonical shear function: S(1)=S'(1)=0, S''(1)=(1-nu)/(1+nu).
class PowerLawShear final : public ShearFunction {
 public:
  PowerLawShear(double nu, double beta) : nu_(nu), beta_(beta) {}
  double value(double y) const override;
  double derivative(double y) const override;

 private:
  double nu_;
  double beta_;
};

/// S(y), canonical closed form.
double shear_S(const Material& mat, double y);

/// f_rad(y) = y^2 S'(y) = (1-nu)/(1+nu) * (y^beta - 1)/beta.
double f_rad(const Material& mat, double y);

/// Hyperelastic tangential shear factor: y^2 S'(y) + 3(1-gamma) y S(y);
/// equals f_rad(y) + 3(1-gamma) y S(y) for the canonical shear function.
double f_tan_from_S(const Material& mat, const ShearFunction& S, double y);

/// B(y) >= 0 with equality iff y = 1; drives coeff_b and Q'.
double B_func(const Material& mat, double y);
double B_func_raw(double beta, double y);
double B_prime_raw(double beta, double y);

/// Shear factor of p_tan - p_rad; removable singularity at y=1 returns
/// (1-2nu)/(1+nu).
double Q_func(const Material& mat, double y);

/// Constitutive pressures (p_rad, p_tan) of the polytropic family.
PressurePair p_hat(const Material& mat, const StrainState& s);

/// Generic scale-invariant constitutive pressures built from a shear function
/// (the S-form route; must agree with p_hat for the canonical S).
PressurePair p_hat_from_shear(const ShearFunction& S, double kappa, double gamma,
                              const StrainState& s);

/// Equation of state of the ball: F = kappa/gamma + p_hat.  F_rad > 0 iff
/// y > y_b, and F_rad vanishes identically on the ray delta = y_b * eta.
PressurePair eos_F(const Material& mat, const StrainState& s);

/// a(delta,eta) = d p_rad/d delta = 3 kappa (1-nu)/(1+nu) y^(beta-1) eta^(gamma-1) > 0.
double coeff_a(const Material& mat, const StrainState& s);

/// The nonsingular product b(delta,eta)*(eta-delta)
///   = 9 kappa (1-nu)/(1+nu) (beta-gamma) B(y) eta^gamma.
double coeff_b_times(const Material& mat, const StrainState& s);

/// Stored energy w(delta,eta) >= branch table in (gamma, beta); w(1,1) = 0.
double stored_energy(const Material& mat, const StrainState& s);

/// Stored energy of the polytropic fluid, w_pf(delta).
double stored_energy_fluid(double kappa, double gamma, double delta);

struct GridWindow {
  double delta_lo = 0.5, delta_hi = 2.0;
  double eta_lo = 0.5, eta_hi = 2.0;
};

/// Max |d_eta h1 - d_delta h2| over the window by central differences, where
/// h1 = delta^-2 p_rad and h2 = (2/3)(delta eta)^-1 (p_tan - p_rad).
/// Pressures are pluggable so a perturbed pair can serve as negative control.
double check_hyperelastic_exactness(const Material& mat, const GridWindow& win,
                                    int n = 16, double h = 1e-4);
using PressureFn = PressurePair (*)(const Material&, const StrainState&);
double check_hyperelastic_exactness_of(PressureFn p, const Material& mat,
                                       const GridWindow& win, int n = 16,
                                       double h = 1e-4);

/// Max relative residual of eps^(1-gamma) a(eps d, eps e) = a(d, e) and the
/// eps^-gamma analogue for b*(eta-delta), over log-uniform samples.
double check_scale_invariance(const Material& mat, int nsamples = 256,
                              double eps = 8.0, std::uint64_t seed = 20260810);

enum class BakerEricksenMode { weak, strong };

struct BakerEricksenVerdict {
  bool pass;
  double worst_q;    // minimum sampled Q
  double witness_y;  // location of the minimum (a violation witness on failure)
};

/// Samples Q over the shear window ([1e-3,1] weak, [1e-6,1e6] strong); pass iff
/// min Q >= -kInequalityTol.
BakerEricksenVerdict baker_ericksen(const Material& mat, BakerEricksenMode mode,
                                    int nsamples = 4096,
                                    std::uint64_t seed = 20260810);

/// Analytic strong Baker-Ericksen predicate:
/// beta >= min(gamma, 3 gamma (1-nu)/(1+nu) - 2(1-2nu)/(1+nu)).
bool strong_be_predicate(double nu, double gamma, double beta);

/// Saint-Venant-Kirchhoff comparison model, evaluated from analytic partial
/// derivatives of its stored energy.
struct SvkEval {
  double w;
  double p_rad;
  double p_tan;
  double a;  // d p_rad / d delta
};
SvkEval svk_eval(double nu, double kappa, const StrainState& s);

/// Aggregated constitutive identity suite for one material.
struct IdentityReport {
  double hyperelastic_residual;    // exactness of h1 ddelta + h2 deta
  double scale_invariance_residual;
  double cbs_spread;               // p_rad spread on the boundary ray, / P_ref
  double linearization_error;      // worst of the four kappa-normalized partials
  double fluid_limit_error;        // w(d,d) vs the polytropic fluid energy
  double route_agreement;          // Q-form vs shear-function-form pressures
  bool weak_be_pass;
  bool strong_be_sampled;
  bool strong_be_predicted;

  bool pass() const {
    return hyperelastic_residual <= 1e-6 && scale_invariance_residual <= 1e-10 &&
           cbs_spread <= 1e-12 && linearization_error <= 1e-8 &&
           fluid_limit_error <= 1e-12 && route_agreement <= 1e-12 &&
           weak_be_pass && strong_be_sampled == strong_be_predicted;
  }
};
IdentityReport run_identity_checks(const Material& mat,
                                   std::uint64_t seed = 20260810);

}  // namespace polyball

#endif
