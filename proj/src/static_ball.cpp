#include "polyball/static_ball.hpp"

#include <cmath>

#include "radial_run.hpp"

namespace polyball {

double y_sink(double gamma) {
  return (4.0 - 3.0 * gamma) / (3.0 * (2.0 - gamma));
}

StrainState series_start(const CenterData& c, const Material& mat, double r0) {
  if (!(r0 > 0.0)) throw std::domain_error("series_start: r0 must be positive");
  if (!(c.delta_c > 0.0)) throw std::domain_error("series_start: delta_c must be positive");
  RadialSystem sys(mat);
  double d, e;
  sys.series_start(c.delta_c, r0, d, e);
  return StrainState(d, e);
}

namespace detail {

namespace {

// The density touchdown of type-A solutions behaves like
// delta ~ (r* - r)^(1/(beta-1)) for beta > 1 (vertical tangent for beta > 2),
// so the floor event must live in the integration chart and the floor state
// itself has to stay resolvable in r.
double chart_floor(const RadialSystem& sys, double delta_floor) {
  if (!sys.w_chart()) return delta_floor;
  return std::max(std::pow(delta_floor, sys.mat.beta), 1e-14);
}

double slope_delta(const RadialSystem& sys, double r, const ode::State<2>& s) {
  ode::State<2> ds;
  sys(r, s, ds);
  if (sys.w_chart()) {
    const double delta = sys.decode(s[0]);
    return ds[0] * std::pow(delta, 1.0 - sys.mat.beta) / sys.mat.beta;
  }
  return ds[0];
}

// Touchdown radius from the floor state: delta^(beta-1) is locally linear in
// r for beta > 1, delta itself for beta <= 1.
double extrapolate_touchdown(const RadialSystem& sys, double r,
                             const ode::State<2>& s) {
  const double delta = sys.decode(s[0]);
  const double sl = slope_delta(sys, r, s);
  if (!(sl < 0.0)) return r;
  const double power = sys.mat.beta > 1.0 ? sys.mat.beta - 1.0 : 1.0;
  return r + delta / (power * -sl);
}

}  // namespace

TypeVerdict classify_from(const RadialSystem& sys, double R, double delta_R,
                          double eta_R, double r_max, const SolveOptions& opts) {
  TypeVerdict v;
  const double yp = y_sink(sys.mat.gamma);
  const bool yp_valid = sys.alpha == 0.0 &&
                        std::abs(sys.mat.gamma - 2.0) > 1e-12 && yp > 1e-3 &&
                        yp < 1.0;

  // Type A ends with y -> 0 at finite radius; type B decays with y pinned at
  // the sink value y_P.  The shear floor is the type-A certificate (it cannot
  // fire on a sink orbit); the chart floor backs it up for steep beta where
  // the shear floor sits below radial resolvability.
  std::vector<ode::Event<2>> events;
  int idx_yfloor = static_cast<int>(events.size());
  events.push_back({[&sys](double, const ode::State<2>& s) {
                      return sys.decode(s[0]) / s[1] - 1e-6;
                    },
                    -1});
  // The chart floor is lowered and the run restarted while the orbit is
  // merely decaying along the sink (y pinned at y_P): the floor must only
  // catch steep type-A touchdowns, not deep type-B decay.
  double floor_cur = chart_floor(sys, opts.delta_floor);
  int idx_floor = static_cast<int>(events.size());
  events.push_back({[&floor_cur](double, const ode::State<2>& s) {
                      return s[0] - floor_cur;
                    },
                    -1});
  int idx_conv = -1;
  if (yp_valid) {
    // Rate-augmented closeness to the sink P: a type-A descent crossing
    // through y_P has O(1) phase rates and must not trigger this.
    idx_conv = static_cast<int>(events.size());
    events.push_back({[&sys, yp, tol = opts.y_converged_tol](double r, const ode::State<2>& s) {
                        double dy, dv, v;
                        sys.phase_rates(r, s, dy, dv, v);
                        return std::abs(sys.decode(s[0]) / s[1] - yp) + std::abs(dy) +
                               std::abs(dv) / (1.0 + v) - tol;
                      },
                      -1});
  }
  int idx_stall = static_cast<int>(events.size());
  events.push_back({[&sys, tol = opts.stall_tol](double r, const ode::State<2>& s) {
                      double dy, dv, vv;
                      sys.phase_rates(r, s, dy, dv, vv);
                      return std::abs(dy) + std::abs(dv) / (1.0 + vv) - tol;
                    },
                    -1});

  ode::Options oo;
  oo.rtol = opts.rtol;
  oo.max_steps = opts.max_steps;
  double x_cur = R;
  ode::State<2> s_cur{sys.encode(delta_R), eta_R};
  ode::Result<2> r;
  for (;;) {
    // Keep absolute control meaningful down at the current chart floor.
    oo.atol = std::min(opts.atol, 1e-3 * floor_cur);
    r = ode::integrate<2>(sys, x_cur, s_cur, r_max, oo, {}, events);
    const double y_now = sys.decode(r.y[0]) / r.y[1];
    if (r.status == ode::Status::event_hit && r.event_index == idx_floor &&
        yp_valid && std::abs(y_now - yp) <= 0.5 * yp && floor_cur > 1e-280) {
      floor_cur *= 1e-12;
      x_cur = r.x;
      s_cur = r.y;
      continue;
    }
    break;
  }

  const double y_end = sys.decode(r.y[0]) / r.y[1];
  v.y_infinity = y_end;
  if (r.status == ode::Status::event_hit &&
      (r.event_index == idx_yfloor || r.event_index == idx_floor)) {
    if (r.event_index == idx_floor && yp_valid && std::abs(y_end - yp) <= 0.5 * yp) {
      // Floor exhausted while still pinned at the sink: infinite-interval
      // signature without a certified convergence radius.
      v.type = BallType::type_b;
      v.warning = std::abs(y_end - yp) > 1e-3;
    } else {
      v.type = BallType::type_a;
      v.R_max_hint = extrapolate_touchdown(sys, r.x, r.y);
    }
  } else if (r.status == ode::Status::event_hit && r.event_index == idx_conv) {
    v.type = BallType::type_b;
    v.warning = false;
  } else if (r.status == ode::Status::event_hit && r.event_index == idx_stall) {
    v.type = BallType::type_b;
    v.warning = !(yp_valid && std::abs(y_end - yp) < 1e-3);
  } else if (r.status == ode::Status::reached_end) {
    v.type = BallType::type_b;
    v.warning = !(yp_valid && std::abs(y_end - yp) < 1e-3);
  } else if (r.status == ode::Status::step_underflow && y_end <= 1e-3 &&
             !(yp_valid && std::abs(y_end - yp) <= 0.5 * yp)) {
    // Steep touchdown resolved down to the last representable step.
    v.type = BallType::type_a;
    v.R_max_hint = extrapolate_touchdown(sys, r.x, r.y);
  } else {
    // Step underflow or budget exhausted while delta was still decaying:
    // finite vs infinite maximal interval undecidable, report B with warning.
    v.type = BallType::type_b;
    v.warning = true;
  }
  return v;
}

RadialRun run_radial(const RadialSystem& sys, double delta_c,
                     const SolveOptions& opts) {
  RadialRun run;
  run.r0 = sys.start_radius(delta_c);
  run.horizon = opts.r_max > 0.0 ? opts.r_max : 1e3 * sys.radial_scale(delta_c);

  double d0, e0;
  sys.series_start(delta_c, run.r0, d0, e0);
  ode::State<2> s0{sys.encode(d0), e0};

  const double yb = sys.mat.boundary_shear();
  std::vector<ode::Event<2>> events;
  int idx_boundary = -1;
  if (yb > 0.0) {
    idx_boundary = static_cast<int>(events.size());
    events.push_back({[&sys, yb](double, const ode::State<2>& s) {
                        return sys.decode(s[0]) / s[1] - yb;
                      },
                      -1});
  }
  const int idx_floor = static_cast<int>(events.size());
  events.push_back({[floor = chart_floor(sys, opts.delta_floor)](
                        double, const ode::State<2>& s) { return s[0] - floor; },
                    -1});
  const int idx_stall = static_cast<int>(events.size());
  events.push_back({[&sys, tol = opts.stall_tol](double r, const ode::State<2>& s) {
                      double dy, dv, v;
                      sys.phase_rates(r, s, dy, dv, v);
                      return std::abs(dy) + std::abs(dv) / (1.0 + v) - tol;
                    },
                    -1});

  ode::Options oo;
  oo.rtol = opts.rtol;
  oo.atol = std::min(opts.atol, 1e-3 * chart_floor(sys, opts.delta_floor));
  oo.max_steps = opts.max_steps;
  oo.h_initial = run.r0 / 16.0;

  std::function<void(const ode::Sample<2>&)> observer =
      [&](const ode::Sample<2>& smp) {
        const double delta = sys.decode(smp.y[0]);
        const double eta = smp.y[1];
        StrainState st(delta, eta);
        auto F = eos_F(sys.mat, st);
        run.min_F_tan = std::min(run.min_F_tan, F.tan);
        run.F_scale = std::max(run.F_scale, std::abs(F.rad));
        if (opts.record)
          run.samples.push_back({smp.x, delta, eta, st.y, F.rad, F.tan,
                                 4.0 * M_PI / 3.0 * eta * smp.x * smp.x * smp.x});
      };

  auto r = ode::integrate<2>(sys, run.r0, s0, run.horizon, oo, observer, events);
  run.steps = r.n_accepted + r.n_rejected;
  const double delta_end = sys.decode(r.y[0]);
  const double eta_end = r.y[1];
  run.y_end = delta_end / eta_end;

  if (r.status == ode::Status::event_hit && r.event_index == idx_boundary) {
    run.stop = StopReason::boundary_shear;
    run.R = r.x;
    run.delta_R = delta_end;
    run.eta_R = eta_end;
    if (opts.classify) {
      const double cls_max = opts.classify_r_max > 0.0
                                 ? opts.classify_r_max
                                 : 1e10 * sys.radial_scale(delta_c);
      TypeVerdict tv = classify_from(sys, run.R, delta_end, eta_end, cls_max, opts);
      run.type = tv.type;
      run.warning = tv.warning;
      run.R_max_hint = tv.R_max_hint;
      run.y_end = tv.y_infinity;
    }
  } else if (r.status == ode::Status::event_hit && r.event_index == idx_floor) {
    // With y_b = 0 the floor is the ball boundary itself; the maximal
    // interval is finite either way.
    run.stop = StopReason::density_floor;
    run.R = extrapolate_touchdown(sys, r.x, r.y);
    run.delta_R = delta_end;
    run.eta_R = eta_end;
    run.type = BallType::type_a;
    run.R_max_hint = run.R;
  } else if (r.status == ode::Status::event_hit && r.event_index == idx_stall) {
    run.stop = StopReason::stalled;
  } else if (r.status == ode::Status::reached_end) {
    run.stop = StopReason::horizon;
  } else if (r.status == ode::Status::step_underflow &&
             run.y_end <= std::max(1e-3, yb) &&
             slope_delta(sys, r.x, r.y) < 0.0) {
    // Steep touchdown (vertical tangent in r) resolved down to the last
    // representable step: locate the boundary by extrapolation.
    run.stop = StopReason::density_floor;
    run.R = extrapolate_touchdown(sys, r.x, r.y);
    run.delta_R = delta_end;
    run.eta_R = eta_end;
    run.type = BallType::type_a;
    run.R_max_hint = run.R;
  } else {
    run.stop = StopReason::solver_failure;
    run.warning = true;
  }
  return run;
}

}  // namespace detail

TypeVerdict classify_type(const BallProfile& profile, const Material& mat,
                          const SolveOptions& opts) {
  if (!profile.boundary_found())
    throw std::invalid_argument("classify_type: profile has no boundary");
  RadialSystem sys(mat);
  const double r_max = opts.classify_r_max > 0.0
                           ? opts.classify_r_max
                           : 1e10 * sys.radial_scale(profile.delta_c);
  return detail::classify_from(sys, profile.R, profile.delta_R, profile.eta_R,
                               r_max, opts);
}

BallProfile integrate_static(const CenterData& c, const Material& mat,
                             const SolveOptions& opts) {
  if (!(c.delta_c > 0.0))
    throw std::domain_error("integrate_static: delta_c must be positive");
  RadialSystem sys(mat);
  detail::RadialRun run = detail::run_radial(sys, c.delta_c, opts);

  BallProfile prof;
  prof.mat = mat;
  prof.delta_c = c.delta_c;
  prof.r0 = run.r0;
  prof.horizon = run.horizon;
  prof.samples = std::move(run.samples);
  prof.R = run.R;
  prof.type = run.type;
  prof.type_warning = run.warning;
  prof.R_max_hint = run.R_max_hint;
  prof.y_infinity = run.y_end;
  prof.stop = run.stop;
  prof.steps = run.steps;
  prof.delta_R = run.delta_R;
  prof.eta_R = run.eta_R;
  prof.min_F_tan = run.min_F_tan;
  prof.F_scale = run.F_scale;
  return prof;
}

}  // namespace polyball
