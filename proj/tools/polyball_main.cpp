// polyball: static equilibria, homologous motion and phase portraits of
// self-gravitating polytropic elastic balls, plus parameter-plane scanners.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyball/atlas.hpp"
#include "polyball/homologous.hpp"
#include "polyball/lagrangian.hpp"
#include "polyball/output.hpp"
#include "polyball/phase_portrait.hpp"
#include "polyball/static_ball.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polyball;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadParams = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitScanTimeouts = 4;

/// Binds CLI options to a JSON config file: flags win, unset flags fall back
/// to config values, then to built-in defaults.
struct ConfigBinder {
  json cfg = json::object();
  std::vector<std::function<void()>> appliers;

  template <typename T>
  void bind(CLI::Option* opt, T& var, const std::string& key) {
    appliers.push_back([this, opt, &var, key] {
      if (opt->count() == 0 && cfg.contains(key)) var = cfg.at(key).get<T>();
    });
  }
  void apply() {
    for (auto& f : appliers) f();
  }
};

struct MaterialFlags {
  double kappa = 1.0;
  double nu = 0.25;
  double gamma = 2.0;
  double beta = 2.0;
  double theta = 1.0;

  void add_to(CLI::App* cmd, ConfigBinder& cb, bool fix_gamma_43 = false) {
    cb.bind(cmd->add_option("--kappa", kappa, "bulk modulus"), kappa, "kappa");
    cb.bind(cmd->add_option("--nu", nu, "Poisson ratio in (-1, 1/2]"), nu, "nu");
    if (fix_gamma_43)
      gamma = 4.0 / 3.0;
    else
      cb.bind(cmd->add_option("--gamma", gamma, "polytropic exponent > 0"), gamma,
              "gamma");
    cb.bind(cmd->add_option("--beta", beta,
                            "shear exponent, != 0, <= 3 gamma (1-nu)/(1+nu)"),
            beta, "beta");
    cb.bind(cmd->add_option("--theta", theta, "gravitational coupling > 0"), theta,
            "theta");
  }
  Material make() const { return Material::make(kappa, nu, gamma, beta, theta); }
};

struct SolverFlags {
  double rtol = 1e-10;
  double atol = 1e-10;
  double r_max = 0.0;
  void add_to(CLI::App* cmd, ConfigBinder& cb) {
    cb.bind(cmd->add_option("--rtol", rtol, "relative tolerance"), rtol, "rtol");
    cb.bind(cmd->add_option("--atol", atol, "absolute tolerance"), atol, "atol");
    cb.bind(cmd->add_option("--r-max", r_max, "integration horizon (0 = auto)"),
            r_max, "r_max");
  }
  SolveOptions make() const {
    SolveOptions o;
    o.rtol = rtol;
    o.atol = atol;
    o.r_max = r_max;
    return o;
  }
};

json run_manifest(const std::string& command, const json& params) {
  return {{"command", command}, {"parameters", params}, {"build", build_info_json()}};
}

void print_kv(const char* key, const std::string& value) {
  std::printf("  %-14s %s\n", key, value.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polytropic elastic self-gravitating balls"};
  app.require_subcommand(1);
  // Global flags (--out, --workers, ...) may appear after the subcommand.
  app.fallthrough();

  ConfigBinder cb;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags win)");

  std::string out_prefix = "polyball_out/run";
  int workers = 0;
  std::uint64_t seed = 20260810;
  bool emit_pgm = false;
  app.add_option("--out", out_prefix, "output path prefix");
  app.add_option("--workers", workers,
                 "worker threads for scans (default: POLYBALL_WORKERS or all cores)");
  app.add_option("--seed", seed, "seed for sampling-based checks");
  app.add_flag("--pgm", emit_pgm, "also write a PGM raster for region scans");

  // ---- eval ----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "evaluate the constitutive family");
  eval_cmd->fallthrough();
  MaterialFlags eval_mat;
  eval_mat.add_to(eval_cmd, cb);
  double eval_delta = 1.0, eval_eta = 1.0;
  bool eval_json = false;
  cb.bind(eval_cmd->add_option("--delta", eval_delta, "normalized density"),
          eval_delta, "delta");
  cb.bind(eval_cmd->add_option("--eta", eval_eta, "normalized mean density"),
          eval_eta, "eta");
  eval_cmd->add_flag("--json", eval_json, "print JSON instead of a table");

  // ---- check ---------------------------------------------------------------
  auto* check_cmd =
      app.add_subcommand("check", "constitutive identity and inequality suite");
  check_cmd->fallthrough();
  MaterialFlags check_mat;
  check_mat.add_to(check_cmd, cb);

  // ---- static --------------------------------------------------------------
  auto* static_cmd = app.add_subcommand("static", "static self-gravitating ball");
  static_cmd->fallthrough();
  MaterialFlags static_mat;
  static_mat.add_to(static_cmd, cb);
  SolverFlags static_solver;
  static_solver.add_to(static_cmd, cb);
  double static_delta_c = 1.0;
  bool static_lagrangian = false;
  cb.bind(static_cmd->add_option("--delta-c", static_delta_c, "central density"),
          static_delta_c, "delta_c");
  static_cmd->add_flag("--lagrangian", static_lagrangian,
                       "also write the configuration-map CSV");

  // ---- homologous ----------------------------------------------------------
  auto* hom_cmd =
      app.add_subcommand("homologous", "homologous collapse/expansion (gamma = 4/3)");
  hom_cmd->fallthrough();
  MaterialFlags hom_mat;
  hom_mat.add_to(hom_cmd, cb, /*fix_gamma_43=*/true);
  SolverFlags hom_solver;
  hom_solver.add_to(hom_cmd, cb);
  double hom_alpha = -1.0, hom_delta0 = 1.0, hom_tend = 0.0;
  cb.bind(hom_cmd->add_option("--alpha", hom_alpha, "separation constant != 0"),
          hom_alpha, "alpha");
  cb.bind(hom_cmd->add_option("--delta0-c", hom_delta0, "central profile value"),
          hom_delta0, "delta0_c");
  cb.bind(hom_cmd->add_option("--t-end", hom_tend, "scale-factor horizon (0 = auto)"),
          hom_tend, "t_end");

  // ---- phase ---------------------------------------------------------------
  auto* phase_cmd = app.add_subcommand("phase", "autonomous phase portrait");
  phase_cmd->fallthrough();
  MaterialFlags phase_mat;
  phase_mat.add_to(phase_cmd, cb);
  SolverFlags phase_solver;
  phase_solver.add_to(phase_cmd, cb);
  double phase_delta_c = 1.0, phase_xi_end = 15.0;
  cb.bind(phase_cmd->add_option("--delta-c", phase_delta_c,
                                "center datum fixing C = theta delta_c^(2-gamma)"),
          phase_delta_c, "delta_c");
  cb.bind(phase_cmd->add_option("--xi-end", phase_xi_end, "log-radius horizon"),
          phase_xi_end, "xi_end");

  // ---- scan ----------------------------------------------------------------
  auto* scan_cmd = app.add_subcommand("scan", "parameter-plane scanners");
  scan_cmd->require_subcommand(1);
  scan_cmd->fallthrough();

  auto* ss = scan_cmd->add_subcommand("static", "(gamma, beta) existence region");
  ss->fallthrough();
  double ss_nu = 0.25, ss_theta = 1.0;
  GridSpec ss_grid;
  ss_grid.x0 = 0.3;
  ss_grid.x1 = 3.0;
  ss_grid.nx = 40;
  ss_grid.y0 = -1.0;
  ss_grid.y1 = 3.0;
  ss_grid.ny = 40;
  cb.bind(ss->add_option("--nu", ss_nu, "Poisson ratio"), ss_nu, "nu");
  cb.bind(ss->add_option("--theta", ss_theta, "gravitational coupling"), ss_theta,
          "theta");
  cb.bind(ss->add_option("--gamma-min", ss_grid.x0, ""), ss_grid.x0, "gamma_min");
  cb.bind(ss->add_option("--gamma-max", ss_grid.x1, ""), ss_grid.x1, "gamma_max");
  cb.bind(ss->add_option("--beta-min", ss_grid.y0, ""), ss_grid.y0, "beta_min");
  cb.bind(ss->add_option("--beta-max", ss_grid.y1, ""), ss_grid.y1, "beta_max");
  cb.bind(ss->add_option("--nx", ss_grid.nx, "gamma resolution"), ss_grid.nx, "nx");
  cb.bind(ss->add_option("--ny", ss_grid.ny, "beta resolution"), ss_grid.ny, "ny");
  cb.bind(ss->add_option("--cell-budget", ss_grid.cell_step_budget,
                         "per-cell integrator step budget"),
          ss_grid.cell_step_budget, "cell_budget");
  cb.bind(ss->add_option("--radius-cutoff", ss_grid.existence_radius_cutoff,
                         "existence radius cutoff in rescaled units"),
          ss_grid.existence_radius_cutoff, "radius_cutoff");

  auto* sg = scan_cmd->add_subcommand("gammastar", "zero-shear threshold curve");
  sg->fallthrough();
  double sg_lo = -0.5, sg_hi = 0.45, sg_theta = 1.0, sg_tol = 0.01;
  int sg_n = 20;
  cb.bind(sg->add_option("--nu-min", sg_lo, ""), sg_lo, "nu_min");
  cb.bind(sg->add_option("--nu-max", sg_hi, ""), sg_hi, "nu_max");
  cb.bind(sg->add_option("--n", sg_n, "number of nu samples"), sg_n, "n");
  cb.bind(sg->add_option("--theta", sg_theta, ""), sg_theta, "theta");
  cb.bind(sg->add_option("--gamma-tol", sg_tol, "bisection width"), sg_tol,
          "gamma_tol");

  auto* sh = scan_cmd->add_subcommand("homologous", "collapse threshold curves");
  sh->fallthrough();
  std::vector<double> sh_nus{0.0, 0.25, 0.45};
  double sh_alo = -2.0, sh_ahi = -0.5, sh_theta = 1.0;
  int sh_na = 6;
  sh->add_option("--nu", sh_nus, "Poisson ratios (repeatable)");
  cb.bind(sh->add_option("--alpha-min", sh_alo, ""), sh_alo, "alpha_min");
  cb.bind(sh->add_option("--alpha-max", sh_ahi, ""), sh_ahi, "alpha_max");
  cb.bind(sh->add_option("--n-alpha", sh_na, ""), sh_na, "n_alpha");
  cb.bind(sh->add_option("--theta", sh_theta, ""), sh_theta, "theta");

  auto* sr = scan_cmd->add_subcommand("raster", "(delta, eta) inequality raster");
  sr->fallthrough();
  MaterialFlags sr_mat;
  sr_mat.add_to(sr, cb);
  std::string sr_model = "polytropic", sr_pred = "hyperbolicity";
  GridSpec sr_win;
  sr_win.x0 = sr_win.y0 = 0.1;
  sr_win.x1 = sr_win.y1 = 3.0;
  sr_win.nx = sr_win.ny = 128;
  sr->add_option("--model", sr_model)
      ->check(CLI::IsMember({"polytropic", "svk"}));
  sr->add_option("--predicate", sr_pred)
      ->check(CLI::IsMember({"hyperbolicity", "baker_ericksen"}));
  cb.bind(sr->add_option("--delta-min", sr_win.x0, ""), sr_win.x0, "delta_min");
  cb.bind(sr->add_option("--delta-max", sr_win.x1, ""), sr_win.x1, "delta_max");
  cb.bind(sr->add_option("--eta-min", sr_win.y0, ""), sr_win.y0, "eta_min");
  cb.bind(sr->add_option("--eta-max", sr_win.y1, ""), sr_win.y1, "eta_max");
  cb.bind(sr->add_option("--resolution", sr_win.nx, ""), sr_win.nx, "resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadParams;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config file: " + config_path);
      in >> cb.cfg;
    }
    cb.apply();

    const fs::path prefix(out_prefix);

    if (*eval_cmd) {
      Material mat = eval_mat.make();
      StrainState s(eval_delta, eval_eta);
      PressurePair p = p_hat(mat, s);
      json j{{"p_rad", p.rad},
             {"p_tan", p.tan},
             {"a", coeff_a(mat, s)},
             {"b_times_eta_minus_delta", coeff_b_times(mat, s)},
             {"w", stored_energy(mat, s)},
             {"Q", Q_func(mat, s.y)},
             {"y", s.y},
             {"y_b", mat.boundary_shear()},
             {"theta", mat.theta},
             {"reference_pressure", mat.reference_pressure()}};
      if (eval_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::printf("constitutive evaluation at (delta, eta) = (%s, %s):\n",
                    fmt17(eval_delta).c_str(), fmt17(eval_eta).c_str());
        for (const char* key : {"p_rad", "p_tan", "a", "b_times_eta_minus_delta",
                                "w", "Q", "y", "y_b", "theta", "reference_pressure"})
          print_kv(key, fmt17(j.at(key).get<double>()));
      }
      return kExitOk;
    }

    if (*check_cmd) {
      Material mat = check_mat.make();
      IdentityReport rep = run_identity_checks(mat, seed);
      json j{{"hyperelastic_residual", rep.hyperelastic_residual},
             {"scale_invariance_residual", rep.scale_invariance_residual},
             {"cbs_spread", rep.cbs_spread},
             {"linearization_error", rep.linearization_error},
             {"fluid_limit_error", rep.fluid_limit_error},
             {"route_agreement", rep.route_agreement},
             {"weak_baker_ericksen", rep.weak_be_pass},
             {"strong_baker_ericksen_sampled", rep.strong_be_sampled},
             {"strong_baker_ericksen_predicted", rep.strong_be_predicted},
             {"pass", rep.pass()}};
      std::cout << j.dump(2) << '\n';
      json manifest = run_manifest("check", {{"material", material_json(mat)},
                                             {"seed", seed}});
      manifest["report"] = j;
      write_json(prefix.string() + "_check.json", manifest);
      return rep.pass() ? kExitOk : kExitSolverFailure;
    }

    if (*static_cmd) {
      Material mat = static_mat.make();
      SolveOptions opts = static_solver.make();
      BallProfile prof = integrate_static(CenterData{static_delta_c}, mat, opts);
      write_profile_csv(prefix.string() + "_profile.csv", prof);
      json sidecar = profile_sidecar(prof, opts);
      write_json(prefix.string() + "_profile.json", sidecar);
      json manifest = run_manifest(
          "static", {{"material", material_json(mat)},
                     {"delta_c", static_delta_c},
                     {"tolerances", tolerances_json(opts)}});
      write_json(prefix.string() + "_manifest.json", manifest);
      if (static_lagrangian && prof.boundary_found()) {
        DeformationMap map = euler_to_lagrange(prof);
        write_deformation_csv(prefix.string() + "_map.csv", map);
      }
      std::printf("static: stop=%s R=%s type=%s -> %s_profile.csv\n",
                  to_string(prof.stop), fmt17(prof.R).c_str(), to_string(prof.type),
                  prefix.string().c_str());
      if (prof.stop == StopReason::solver_failure) return kExitSolverFailure;
      return kExitOk;
    }

    if (*hom_cmd) {
      Material mat = hom_mat.make();
      auto params = HomologousParams::make(mat, hom_alpha, hom_delta0);
      SolveOptions opts = hom_solver.make();
      OmegaTrajectory traj = solve_omega(params, hom_tend, opts);
      SelfSimilarProfile prof = integrate_profile(params, opts);
      write_omega_csv(prefix.string() + "_omega.csv", traj);
      write_selfsimilar_csv(prefix.string() + "_profile.csv", prof);
      write_json(prefix.string() + "_homologous.json",
                 homologous_sidecar(prof, traj, opts));
      json manifest = run_manifest(
          "homologous", {{"material", material_json(mat)},
                         {"alpha", hom_alpha},
                         {"delta0_c", hom_delta0},
                         {"t_end", hom_tend},
                         {"tolerances", tolerances_json(opts)}});
      write_json(prefix.string() + "_manifest.json", manifest);
      std::printf("homologous: stop=%s Z=%s T=%s -> %s_omega.csv\n",
                  to_string(prof.stop), fmt17(prof.Z).c_str(),
                  traj.has_collapse() ? fmt17(traj.collapse_time).c_str() : "none",
                  prefix.string().c_str());
      if (prof.stop == StopReason::solver_failure) return kExitSolverFailure;
      return kExitOk;
    }

    if (*phase_cmd) {
      Material mat = phase_mat.make();
      SolveOptions opts = phase_solver.make();
      json manifest = run_manifest(
          "phase", {{"material", material_json(mat)},
                    {"delta_c", phase_delta_c},
                    {"xi_end", phase_xi_end},
                    {"tolerances", tolerances_json(opts)}});
      if (std::abs(mat.gamma - 2.0) < 1e-12) {
        GammaTwoOrbit orb = track_shear_gamma2(mat, phase_delta_c,
                                               std::exp(phase_xi_end), opts);
        std::ofstream out(prefix.string() + "_orbit.csv");
        out << "r,y,eta\n";
        for (const auto& s : orb.samples)
          out << fmt17(s.r) << ',' << fmt17(s.y) << ',' << fmt17(s.eta) << '\n';
        write_json(prefix.string() + "_manifest.json", manifest);
        std::printf("phase (gamma = 2 decoupled route) -> %s_orbit.csv\n",
                    prefix.string().c_str());
        return kExitOk;
      }
      const double C =
          mat.theta * std::pow(phase_delta_c, 2.0 - mat.gamma);
      PhaseOrbit orbit = track_gamma(mat, C, phase_xi_end, opts);
      write_orbit_csv(prefix.string() + "_orbit.csv", orbit);
      write_json(prefix.string() + "_fixed_points.json",
                 fixed_points_json(fixed_points(mat)));
      write_json(prefix.string() + "_manifest.json", manifest);
      std::printf("phase: %zu samples, y_end=%s -> %s_orbit.csv\n",
                  orbit.samples.size(), fmt17(orbit.y_end).c_str(),
                  prefix.string().c_str());
      return orbit.end == OrbitEnd::solver_failure ? kExitSolverFailure : kExitOk;
    }

    if (*ss) {
      RegionMap map = scan_static_region(ss_nu, ss_theta, ss_grid, workers);
      write_region_csv(prefix.string() + "_region.csv", map);
      if (emit_pgm) write_region_pgm(prefix.string() + "_region.pgm", map);
      json manifest = run_manifest("scan static", {{"nu", ss_nu}, {"theta", ss_theta}});
      manifest["region"] = region_manifest(map);
      write_json(prefix.string() + "_manifest.json", manifest);
      int timeouts = 0;
      for (const auto& c : map.cells)
        if (c.verdict == CellVerdict::timeout) ++timeouts;
      std::printf("scan static: %dx%d cells, %d timeouts, gamma_star ~ %s -> %s\n",
                  ss_grid.nx, ss_grid.ny, timeouts,
                  fmt17(map.gamma_star_estimate).c_str(), prefix.string().c_str());
      return timeouts > 0 ? kExitScanTimeouts : kExitOk;
    }

    if (*sg) {
      auto pts = scan_gammastar_curve(sg_lo, sg_hi, sg_n, sg_theta, workers, sg_tol);
      std::ofstream out(prefix.string() + "_curve.csv");
      out << "nu,gamma_star,uncertainty,ok\n";
      int failures = 0;
      for (const auto& p : pts) {
        out << fmt17(p.nu) << ',' << fmt17(p.gamma_star) << ','
            << fmt17(p.uncertainty) << ',' << (p.ok ? 1 : 0) << '\n';
        if (!p.ok) ++failures;
      }
      json manifest = run_manifest("scan gammastar",
                                   {{"nu_min", sg_lo},
                                    {"nu_max", sg_hi},
                                    {"n", sg_n},
                                    {"theta", sg_theta},
                                    {"gamma_tol", sg_tol}});
      write_json(prefix.string() + "_manifest.json", manifest);
      std::printf("scan gammastar: %d samples, %d failures -> %s_curve.csv\n", sg_n,
                  failures, prefix.string().c_str());
      return failures > 0 ? kExitScanTimeouts : kExitOk;
    }

    if (*sh) {
      ThresholdScan scan =
          scan_homologous_threshold(sh_nus, sh_alo, sh_ahi, sh_na, sh_theta, workers);
      std::ofstream out(prefix.string() + "_thresholds.csv");
      out << "nu,alpha,delta_star\n";
      int failures = 0;
      for (std::size_t k = 0; k < scan.nus.size(); ++k)
        for (std::size_t a = 0; a < scan.alphas.size(); ++a) {
          out << fmt17(scan.nus[k]) << ',' << fmt17(scan.alphas[a]) << ','
              << fmt17(scan.delta_star[k][a]) << '\n';
          if (!std::isfinite(scan.delta_star[k][a])) ++failures;
        }
      json manifest = run_manifest("scan homologous",
                                   {{"nus", sh_nus},
                                    {"alpha_min", sh_alo},
                                    {"alpha_max", sh_ahi},
                                    {"n_alpha", sh_na},
                                    {"theta", sh_theta}});
      write_json(prefix.string() + "_manifest.json", manifest);
      std::printf("scan homologous: %zu curves -> %s_thresholds.csv\n",
                  scan.nus.size(), prefix.string().c_str());
      return failures > 0 ? kExitScanTimeouts : kExitOk;
    }

    if (*sr) {
      sr_win.ny = sr_win.nx;
      Material mat = sr_mat.make();
      RegionMap map = raster_inequality_region(
          sr_model == "svk" ? RasterModel::svk : RasterModel::polytropic,
          sr_pred == "baker_ericksen" ? RasterPredicate::baker_ericksen
                                      : RasterPredicate::hyperbolicity,
          mat, sr_win, workers);
      write_region_csv(prefix.string() + "_raster.csv", map);
      if (emit_pgm) write_region_pgm(prefix.string() + "_raster.pgm", map);
      json manifest = run_manifest("scan raster", {{"model", sr_model},
                                                   {"predicate", sr_pred},
                                                   {"material", material_json(mat)}});
      manifest["region"] = region_manifest(map);
      write_json(prefix.string() + "_manifest.json", manifest);
      int fails = 0;
      for (const auto& c : map.cells)
        if (c.verdict != CellVerdict::exists_a) ++fails;
      std::printf("scan raster: %d/%zu pixels fail -> %s_raster.csv\n", fails,
                  map.cells.size(), prefix.string().c_str());
      return kExitOk;
    }
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadParams;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadParams;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolverFailure;
  }
  return kExitOk;
}
