#ifndef POLYBALL_OUTPUT_HPP
#define POLYBALL_OUTPUT_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "polyball/atlas.hpp"
#include "polyball/homologous.hpp"
#include "polyball/lagrangian.hpp"
#include "polyball/phase_portrait.hpp"
#include "polyball/static_ball.hpp"

namespace polyball {

/// Floating-point serialization with 17 significant digits (lossless
/// round trip).
std::string fmt17(double v);

nlohmann::json material_json(const Material& mat);
nlohmann::json tolerances_json(const SolveOptions& opts);
nlohmann::json build_info_json();

const char* to_string(BallType t);
const char* to_string(StopReason r);

void write_profile_csv(const std::filesystem::path& path, const BallProfile& prof);
nlohmann::json profile_sidecar(const BallProfile& prof, const SolveOptions& opts);

void write_omega_csv(const std::filesystem::path& path, const OmegaTrajectory& traj);
void write_selfsimilar_csv(const std::filesystem::path& path,
                           const SelfSimilarProfile& prof);
nlohmann::json homologous_sidecar(const SelfSimilarProfile& prof,
                                  const OmegaTrajectory& traj,
                                  const SolveOptions& opts);

void write_orbit_csv(const std::filesystem::path& path, const PhaseOrbit& orbit);
nlohmann::json fixed_points_json(const std::vector<FixedPointRecord>& fps);

void write_deformation_csv(const std::filesystem::path& path,
                           const DeformationMap& map);

void write_region_csv(const std::filesystem::path& path, const RegionMap& map);
void write_region_pgm(const std::filesystem::path& path, const RegionMap& map);
nlohmann::json region_manifest(const RegionMap& map);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace polyball

#endif
