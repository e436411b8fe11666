#include "polyball/output.hpp"

#include <cstdio>
#include <fstream>

namespace polyball {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json material_json(const Material& mat) {
  return {{"kappa", mat.kappa},
          {"nu", mat.nu},
          {"gamma", mat.gamma},
          {"beta", mat.beta},
          {"theta", mat.theta},
          {"y_b", mat.boundary_shear()},
          {"reference_pressure", mat.reference_pressure()}};
}

nlohmann::json tolerances_json(const SolveOptions& opts) {
  return {{"rtol", opts.rtol},
          {"atol", opts.atol},
          {"r_max", opts.r_max},
          {"classify_r_max", opts.classify_r_max},
          {"delta_floor", opts.delta_floor},
          {"max_steps", opts.max_steps},
          {"y_converged_tol", opts.y_converged_tol},
          {"stall_tol", opts.stall_tol},
          {"branch_epsilon", kBranchEpsilon},
          {"inequality_tol", kInequalityTol}};
}

nlohmann::json build_info_json() {
  return {{"project", "polyball"},
          {"version", "1.0.0"},
          {"compiler",
#if defined(__clang__)
           std::string("clang ") + __clang_version__
#elif defined(__GNUC__)
           std::string("gcc ") + std::to_string(__GNUC__) + "." +
               std::to_string(__GNUC_MINOR__)
#else
           "unknown"
#endif
          },
          {"cxx_standard", static_cast<long>(__cplusplus)}};
}

const char* to_string(BallType t) {
  switch (t) {
    case BallType::type_a: return "A";
    case BallType::type_b: return "B";
    case BallType::none: return "none";
  }
  return "?";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::boundary_shear: return "boundary_shear";
    case StopReason::density_floor: return "density_floor";
    case StopReason::horizon: return "horizon";
    case StopReason::stalled: return "stalled";
    case StopReason::solver_failure: return "solver_failure";
  }
  return "?";
}

void write_profile_csv(const std::filesystem::path& path, const BallProfile& prof) {
  auto out = open_out(path);
  out << "r,delta,eta,y,F_rad,F_tan,mass\n";
  for (const auto& s : prof.samples)
    out << fmt17(s.r) << ',' << fmt17(s.delta) << ',' << fmt17(s.eta) << ','
        << fmt17(s.y) << ',' << fmt17(s.F_rad) << ',' << fmt17(s.F_tan) << ','
        << fmt17(s.mass) << '\n';
}

nlohmann::json profile_sidecar(const BallProfile& prof, const SolveOptions& opts) {
  nlohmann::json j{{"R", prof.R},
                   {"type", to_string(prof.type)},
                   {"type_warning", prof.type_warning},
                   {"delta_c", prof.delta_c},
                   {"material", material_json(prof.mat)},
                   {"theta", prof.mat.theta},
                   {"tolerances", tolerances_json(opts)},
                   {"stop", to_string(prof.stop)},
                   {"horizon", prof.horizon},
                   {"r0", prof.r0},
                   {"steps", prof.steps},
                   {"y_infinity", prof.y_infinity}};
  if (std::isfinite(prof.R_max_hint)) j["R_max_hint"] = prof.R_max_hint;
  return j;
}

void write_omega_csv(const std::filesystem::path& path, const OmegaTrajectory& traj) {
  auto out = open_out(path);
  out << "t,omega,omegadot\n";
  for (const auto& s : traj.samples)
    out << fmt17(s.t) << ',' << fmt17(s.omega) << ',' << fmt17(s.omegadot) << '\n';
}

void write_selfsimilar_csv(const std::filesystem::path& path,
                           const SelfSimilarProfile& prof) {
  auto out = open_out(path);
  out << "z,delta0,eta0,y0,F_rad,F_tan\n";
  for (const auto& s : prof.samples)
    out << fmt17(s.r) << ',' << fmt17(s.delta) << ',' << fmt17(s.eta) << ','
        << fmt17(s.y) << ',' << fmt17(s.F_rad) << ',' << fmt17(s.F_tan) << '\n';
}

nlohmann::json homologous_sidecar(const SelfSimilarProfile& prof,
                                  const OmegaTrajectory& traj,
                                  const SolveOptions& opts) {
  nlohmann::json j{{"alpha", prof.params.alpha},
                   {"Z", prof.Z},
                   {"material", material_json(prof.params.mat)},
                   {"theta", prof.params.mat.theta},
                   {"delta0_c", prof.params.delta0_c},
                   {"type", to_string(prof.type)},
                   {"stop", to_string(prof.stop)},
                   {"tolerances", tolerances_json(opts)},
                   {"energy_drift", traj.energy_drift},
                   {"c_omega", traj.c_omega}};
  if (traj.has_collapse()) j["T"] = traj.collapse_time;
  if (std::isfinite(prof.Z_max_hint)) j["Z_max_hint"] = prof.Z_max_hint;
  return j;
}

void write_orbit_csv(const std::filesystem::path& path, const PhaseOrbit& orbit) {
  auto out = open_out(path);
  out << "xi,y,v\n";
  for (const auto& s : orbit.samples)
    out << fmt17(s.xi) << ',' << fmt17(s.y) << ',' << fmt17(s.v) << '\n';
}

nlohmann::json fixed_points_json(const std::vector<FixedPointRecord>& fps) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fps) {
    nlohmann::json j{{"name", std::string(1, f.name)},
                     {"y", f.y},
                     {"v", f.v},
                     {"field_residual", f.field_residual},
                     {"eigen_valid", f.eigen_valid}};
    if (f.eigen_valid) {
      j["eigenvalues"] = {{{"re", f.eig_re[0]}, {"im", f.eig_im[0]}},
                          {{"re", f.eig_re[1]}, {"im", f.eig_im[1]}}};
      switch (f.cls) {
        case FixedPointClass::saddle: j["class"] = "saddle"; break;
        case FixedPointClass::sink: j["class"] = "sink"; break;
        case FixedPointClass::source: j["class"] = "source"; break;
        case FixedPointClass::center_like: j["class"] = "center-like"; break;
      }
      if (f.eigvec_valid)
        j["eigenvectors"] = {{f.eigvec[0][0], f.eigvec[0][1]},
                             {f.eigvec[1][0], f.eigvec[1][1]}};
    }
    arr.push_back(j);
  }
  return arr;
}

void write_deformation_csv(const std::filesystem::path& path,
                           const DeformationMap& map) {
  auto out = open_out(path);
  out << "z,psi,psiprime,lambda1,lambda2\n";
  const auto& z = map.nodes();
  const auto& psi = map.values();
  const auto& d = map.slopes();
  for (std::size_t i = 0; i < z.size(); ++i) {
    // lambda1 = psi'(z), lambda2 = psi(z)/z (center limit psi'(0)).
    const double l1 = d[i];
    const double l2 = z[i] > 0.0 ? psi[i] / z[i] : d[i];
    out << fmt17(z[i]) << ',' << fmt17(psi[i]) << ',' << fmt17(d[i]) << ','
        << fmt17(l1) << ',' << fmt17(l2) << '\n';
  }
}

void write_region_csv(const std::filesystem::path& path, const RegionMap& map) {
  auto out = open_out(path);
  out << "x,y,verdict,measure,steps,warning\n";
  for (int j = 0; j < map.grid.ny; ++j)
    for (int i = 0; i < map.grid.nx; ++i) {
      const Cell& c = map.at(i, j);
      out << fmt17(map.grid.x_at(i)) << ',' << fmt17(map.grid.y_at(j)) << ','
          << to_string(c.verdict) << ',' << fmt17(c.measure) << ',' << c.steps
          << ',' << (c.warning ? 1 : 0) << '\n';
    }
}

void write_region_pgm(const std::filesystem::path& path, const RegionMap& map) {
  auto out = open_out(path);
  out << "P2\n" << map.grid.nx << ' ' << map.grid.ny << "\n255\n";
  for (int j = map.grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < map.grid.nx; ++i) {
      int g = 0;
      switch (map.at(i, j).verdict) {
        case CellVerdict::exists_a: g = 255; break;
        case CellVerdict::exists_b: g = 180; break;
        case CellVerdict::none: g = 60; break;
        case CellVerdict::inadmissible: g = 0; break;
        case CellVerdict::timeout: g = 120; break;
      }
      out << g << (i + 1 < map.grid.nx ? ' ' : '\n');
    }
  }
}

nlohmann::json region_manifest(const RegionMap& map) {
  return {{"grid",
           {{"x0", map.grid.x0},
            {"x1", map.grid.x1},
            {"nx", map.grid.nx},
            {"y0", map.grid.y0},
            {"y1", map.grid.y1},
            {"ny", map.grid.ny},
            {"cell_step_budget", map.grid.cell_step_budget},
            {"existence_radius_cutoff", map.grid.existence_radius_cutoff}}},
          {"tolerances", tolerances_json(map.grid.solver)},
          {"gamma_star_estimate", map.gamma_star_estimate},
          {"gamma_star_uncertainty", map.gamma_star_uncertainty},
          {"wall_ms", map.wall_ms},
          {"build", build_info_json()}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace polyball
