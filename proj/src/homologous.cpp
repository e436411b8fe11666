#include "polyball/homologous.hpp"

#include <cmath>

#include "radial_run.hpp"

namespace polyball {

HomologousParams HomologousParams::make(const Material& mat, double alpha,
                                        double delta0_c) {
  if (std::abs(mat.gamma - 4.0 / 3.0) > 1e-12)
    throw std::domain_error("homologous motion requires gamma = 4/3 exactly");
  if (alpha == 0.0) throw std::domain_error("homologous: alpha != 0 required");
  if (!(delta0_c > 0.0)) throw std::domain_error("homologous: delta0_c > 0 required");
  return {mat, alpha, delta0_c};
}

OmegaTrajectory solve_omega(const HomologousParams& p, double t_end,
                            const SolveOptions& opts) {
  const double c = p.c_omega();
  const double a = p.alpha;
  OmegaTrajectory traj;
  traj.c_omega = c;
  traj.alpha = a;

  if (t_end <= 0.0) {
    // Collapse happens at T = (pi/2)/sqrt(2 c |a|); pick a horizon past it
    // (or a comparable expansion window for a > 0).
    t_end = 2.0 * (M_PI / 2.0) / std::sqrt(2.0 * c * std::abs(a));
  }

  auto f = [c, a](double, const ode::State<2>& s, ode::State<2>& ds) {
    ds[0] = s[1];
    ds[1] = c * a / (s[0] * s[0]);
  };

  const double E0 = c * a;  // (1/2) w'^2 + c a / w, conserved
  double drift = 0.0;
  std::function<void(const ode::Sample<2>&)> obs = [&](const ode::Sample<2>& s) {
    const double kin = 0.5 * s.y[1] * s.y[1];
    const double pot = c * a / s.y[0];
    const double scale = std::max(std::abs(E0), std::abs(kin) + std::abs(pot));
    drift = std::max(drift, std::abs(kin + pot - E0) / scale);
    traj.samples.push_back({s.x, s.y[0], s.y[1]});
  };

  std::vector<ode::Event<2>> events;
  if (a < 0.0)
    events.push_back({[](double, const ode::State<2>& s) { return s[0] - 1e-8; }, -1});

  ode::Options oo;
  oo.rtol = opts.rtol;
  oo.atol = std::min(opts.atol, 1e-12);
  oo.max_steps = opts.max_steps;
  auto r = ode::integrate<2>(f, 0.0, {1.0, 0.0}, t_end, oo, obs, events);
  traj.energy_drift = drift;

  if (r.status == ode::Status::event_hit) {
    // omega ~ [(3/2) sqrt(2c|a|) (T-t)]^(2/3) near collapse.
    traj.collapse_time = r.x + (2.0 / 3.0) * r.y[0] / std::abs(r.y[1]);
  }
  return traj;
}

SelfSimilarProfile integrate_profile(const HomologousParams& p,
                                     const SolveOptions& opts) {
  RadialSystem sys(p.mat, p.alpha);
  detail::RadialRun run = detail::run_radial(sys, p.delta0_c, opts);

  SelfSimilarProfile prof;
  prof.params = p;
  prof.z0 = run.r0;
  prof.horizon = run.horizon;
  prof.samples = std::move(run.samples);
  prof.Z = run.R;
  prof.type = run.type;
  prof.type_warning = run.warning;
  prof.Z_max_hint = run.R_max_hint;
  prof.stop = run.stop;
  prof.steps = run.steps;
  prof.delta_Z = run.delta_R;
  prof.eta_Z = run.eta_R;
  prof.min_F_tan = run.min_F_tan;
  prof.F_scale = run.F_scale;
  return prof;
}

namespace {

CubicHermite omega_curve(const OmegaTrajectory& traj) {
  std::vector<double> t, w, d;
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    w.push_back(s.omega);
    d.push_back(s.omegadot);
  }
  return CubicHermite(std::move(t), std::move(w), std::move(d));
}

CubicHermite omegadot_curve(const OmegaTrajectory& traj) {
  std::vector<double> t, w, d;
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    w.push_back(s.omegadot);
    d.push_back(traj.c_omega * traj.alpha / (s.omega * s.omega));
  }
  return CubicHermite(std::move(t), std::move(w), std::move(d));
}

CubicHermite profile_curve(const SelfSimilarProfile& prof, bool eta) {
  RadialSystem sys(prof.params.mat, prof.params.alpha);
  std::vector<double> z, v, d;
  for (const auto& s : prof.samples) {
    ode::State<2> st{sys.encode(s.delta), s.eta}, ds;
    sys(s.r, st, ds);
    const double ddelta =
        sys.w_chart() ? ds[0] * std::pow(s.delta, 1.0 - sys.mat.beta) / sys.mat.beta
                      : ds[0];
    z.push_back(s.r);
    v.push_back(eta ? s.eta : s.delta);
    d.push_back(eta ? ds[1] : ddelta);
  }
  return CubicHermite(std::move(z), std::move(v), std::move(d));
}

}  // namespace

HomologousBall::HomologousBall(const OmegaTrajectory& traj,
                               const SelfSimilarProfile& prof)
    : traj_(traj),
      prof_(prof),
      omega_(omega_curve(traj)),
      omegadot_(omegadot_curve(traj)),
      delta0_(profile_curve(prof, false)),
      eta0_(profile_curve(prof, true)) {
  if (!prof.boundary_found())
    throw std::invalid_argument("assemble_solution: profile has no boundary Z");
}

double HomologousBall::total_mass() const {
  return 4.0 * M_PI / 3.0 * prof_.eta_Z * prof_.Z * prof_.Z * prof_.Z;
}

double HomologousBall::density(double t, double r) const {
  const double w = omega_(t);
  const double z = r / w;
  if (z > prof_.Z) return 0.0;
  const double d0 = z <= delta0_.front_x() ? prof_.params.delta0_c : delta0_(z);
  return d0 / (w * w * w);
}

double HomologousBall::velocity(double t, double r) const {
  const double w = omega_(t);
  if (r / w > prof_.Z) return 0.0;
  return omegadot_(t) / w * r;
}

PressurePair HomologousBall::pressures(double t, double r) const {
  const double w = omega_(t);
  const double z = r / w;
  if (z > prof_.Z) return {0.0, 0.0};
  double d0, e0;
  if (z <= delta0_.front_x()) {
    d0 = e0 = prof_.params.delta0_c;
  } else {
    d0 = delta0_(z);
    e0 = eta0_(z);
  }
  PressurePair F = eos_F(prof_.params.mat, StrainState(d0, e0));
  const double s = std::pow(w, -4.0);
  return {s * F.rad, s * F.tan};
}

HomologousBall assemble_solution(const OmegaTrajectory& traj,
                                 const SelfSimilarProfile& prof) {
  return HomologousBall(traj, prof);
}

double find_threshold(double alpha, double nu, double theta, double bracket_lo,
                      double bracket_hi, double rel_tol, const SolveOptions& opts) {
  if (!(alpha < 0.0))
    throw std::domain_error("find_threshold: collapse requires alpha < 0");
  if (!(bracket_lo > 0.0 && bracket_hi > bracket_lo))
    throw std::invalid_argument("find_threshold: bad bracket");
  const double beta = 4.0 * poisson_factor(nu);  // zero boundary shear
  Material mat = Material::make(1.0, nu, 4.0 / 3.0, beta, theta);

  SolveOptions o = opts;
  o.record = false;
  o.classify = false;
  auto exists = [&](double dc) {
    SelfSimilarProfile prof = integrate_profile(HomologousParams::make(mat, alpha, dc), o);
    return prof.boundary_found() && prof.pressures_positive();
  };
  bool lo_ex = exists(bracket_lo), hi_ex = exists(bracket_hi);
  if (lo_ex || !hi_ex)
    throw std::invalid_argument(
        "find_threshold: no sign change in bracket (existence is monotone "
        "increasing in delta0_c)");
  double lo = bracket_lo, hi = bracket_hi;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (exists(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace polyball
