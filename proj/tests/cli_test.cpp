#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "polyball_cli_test";

int run(const std::string& args, const std::string& log = "out.txt") {
  const std::string cmd = std::string(POLYBALL_CLI) + " " + args + " > " +
                          (kWork / log).string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

struct Setup {
  Setup() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
} setup;

}  // namespace

TEST_CASE("help available for every subcommand") {
  CHECK(run("--help") == 0);
  for (const char* sub : {"eval", "check", "static", "homologous", "phase", "scan"})
    CHECK(run(std::string(sub) + " --help") == 0);
  for (const char* sub : {"static", "gammastar", "homologous", "raster"})
    CHECK(run(std::string("scan ") + sub + " --help") == 0);
}

TEST_CASE("eval prints the constitutive oracle values") {
  const auto out = (kWork / "eval.json").string();
  CHECK(run("eval --nu 0.25 --gamma 1.33333333333333333 --beta 2 --delta 0.5 "
            "--eta 1 --json",
            "eval_stdout.txt") == 0);
  json j = json::parse(slurp(kWork / "eval_stdout.txt"));
  CHECK(j.at("p_rad").get<double>() == doctest::Approx(-0.675).epsilon(1e-12));
  CHECK(j.at("y_b").get<double>() ==
        doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("malformed parameters exit with code 2") {
  CHECK(run("eval --beta 0") == 2);
  CHECK(run("eval --nu 0.7") == 2);
  CHECK(run("static --nu 0.25 --gamma 1 --beta 2") == 2);  // inadmissible
  CHECK(run("eval --no-such-flag 1") == 2);
}

TEST_CASE("static run writes profile, sidecar and manifest") {
  const auto p = (kWork / "st").string();
  CHECK(run("static --nu 0.5 --gamma 2 --beta 2 --out " + p) == 0);
  const std::string csv = slurp(kWork / "st_profile.csv");
  CHECK(csv.rfind("r,delta,eta,y,F_rad,F_tan,mass\n", 0) == 0);
  json side = slurp_json(kWork / "st_profile.json");
  CHECK(side.at("R").get<double>() ==
        doctest::Approx(M_PI / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(side.at("type").get<std::string>() == "A");
  json man = slurp_json(kWork / "st_manifest.json");
  CHECK(man.at("parameters").at("tolerances").contains("rtol"));
  CHECK(man.at("build").contains("version"));
}

TEST_CASE("homologous run writes omega and profile files") {
  const auto p = (kWork / "h").string();
  CHECK(run("homologous --nu 0.25 --beta 1.2 --alpha -1 --delta0-c 5 --out " + p) == 0);
  CHECK(slurp(kWork / "h_omega.csv").rfind("t,omega,omegadot\n", 0) == 0);
  CHECK(slurp(kWork / "h_profile.csv").rfind("z,delta0,eta0,y0,F_rad,F_tan\n", 0) == 0);
  json side = slurp_json(kWork / "h_homologous.json");
  CHECK(side.at("T").get<double>() > 0.0);
  CHECK(side.at("Z").get<double>() > 0.0);
}

TEST_CASE("phase run writes orbit and fixed points") {
  const auto p = (kWork / "ph").string();
  CHECK(run("phase --nu 0 --gamma 1 --beta 0.5 --xi-end 10 --out " + p) == 0);
  CHECK(slurp(kWork / "ph_orbit.csv").rfind("xi,y,v\n", 0) == 0);
  json fps = slurp_json(kWork / "ph_fixed_points.json");
  REQUIRE(fps.is_array());
  CHECK(fps.size() == 3);  // O, Q and P
}

TEST_CASE("scans are reproducible byte-for-byte across worker counts") {
  const std::string grid =
      " --nu 0.25 --gamma-min 0.8 --gamma-max 2.6 --beta-min -0.5 --beta-max 2.2 "
      "--nx 9 --ny 9";
  CHECK(run("scan static" + grid + " --workers 1 --out " + (kWork / "s1").string()) == 0);
  CHECK(run("scan static" + grid + " --workers 4 --out " + (kWork / "s4").string()) == 0);
  CHECK(slurp(kWork / "s1_region.csv") == slurp(kWork / "s4_region.csv"));
  CHECK(!slurp(kWork / "s1_region.csv").empty());
}

TEST_CASE("scan with exhausted budgets reports exit code 4") {
  CHECK(run("scan static --nu 0.25 --gamma-min 0.8 --gamma-max 1.2 --beta-min 0.5 "
            "--beta-max 1.0 --nx 3 --ny 3 --cell-budget 20 --out " +
            (kWork / "tmo").string()) == 4);
  // Partial results still written.
  CHECK(slurp(kWork / "tmo_region.csv").find("timeout") != std::string::npos);
}

TEST_CASE("config file merges under explicit flags") {
  std::ofstream cfg(kWork / "cfg.json");
  cfg << R"({"nu": 0.25, "gamma": 1.33333333333333333, "beta": 2.0, "delta": 0.5,)"
      << R"( "eta": 1.0})";
  cfg.close();
  CHECK(run("eval --config " + (kWork / "cfg.json").string() + " --json",
            "cfg_eval.txt") == 0);
  json j = json::parse(slurp(kWork / "cfg_eval.txt"));
  CHECK(j.at("p_rad").get<double>() == doctest::Approx(-0.675).epsilon(1e-12));
  // Flag wins over the config value.
  CHECK(run("eval --config " + (kWork / "cfg.json").string() + " --delta 1 --json",
            "cfg_eval2.txt") == 0);
  json j2 = json::parse(slurp(kWork / "cfg_eval2.txt"));
  CHECK(j2.at("p_rad").get<double>() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("gammastar scan reproduces the zero-shear threshold") {
  const auto p = (kWork / "gs").string();
  CHECK(run("scan gammastar --nu-min 0.25 --nu-max 0.2500001 --n 2 --gamma-tol "
            "0.02 --out " + p) == 0);
  std::istringstream csv(slurp(kWork / "gs_curve.csv"));
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == "nu,gamma_star,uncertainty,ok");
  std::getline(csv, row);
  const auto c1 = row.find(','), c2 = row.find(',', c1 + 1);
  const double gamma_star = std::stod(row.substr(c1 + 1, c2 - c1 - 1));
  CHECK(std::abs(gamma_star - 1.08) <= 0.06);
}

TEST_CASE("POLYBALL_WORKERS steers the default worker count") {
  const std::string grid =
      " --nu 0.25 --gamma-min 0.8 --gamma-max 2.6 --beta-min -0.5 --beta-max 2.2 "
      "--nx 9 --ny 9";
  const std::string cmd = std::string("POLYBALL_WORKERS=2 ") + POLYBALL_CLI +
                          " scan static" + grid + " --out " +
                          (kWork / "env").string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(slurp(kWork / "env_region.csv") == slurp(kWork / "s1_region.csv"));
}

TEST_CASE("raster emits PGM on request") {
  const auto p = (kWork / "ra").string();
  CHECK(run("scan raster --model svk --predicate hyperbolicity --resolution 16 "
            "--pgm --out " + p) == 0);
  CHECK(slurp(kWork / "ra_raster.pgm").rfind("P2\n16 16\n255\n", 0) == 0);
}
