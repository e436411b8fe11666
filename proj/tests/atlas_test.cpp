#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyball/atlas.hpp"

using namespace polyball;

TEST_CASE("serial and parallel scans are bit-identical") {
  GridSpec grid;
  grid.x0 = 0.8;
  grid.x1 = 3.0;
  grid.nx = 7;
  grid.y0 = -0.5;
  grid.y1 = 2.5;
  grid.ny = 7;
  RegionMap serial = scan_static_region(0.25, 1.0, grid, 1);
  RegionMap parallel = scan_static_region(0.25, 1.0, grid, 4);
  CHECK(same_cells(serial, parallel));
  CHECK(serial.gamma_star_estimate == parallel.gamma_star_estimate);

  GridSpec win;
  win.x0 = win.y0 = 0.1;
  win.x1 = win.y1 = 3.0;
  win.nx = win.ny = 33;
  Material m = Material::make(1.0, 0.25, 2.0, 1.5);
  CHECK(same_cells(raster_inequality_region(RasterModel::svk,
                                            RasterPredicate::baker_ericksen, m, win, 1),
                   raster_inequality_region(RasterModel::svk,
                                            RasterPredicate::baker_ericksen, m, win, 4)));
}

TEST_CASE("scan verdicts honor the analytic existence regions") {
  // V_A: gamma > 2, 1 < beta <= gamma -> type A balls.
  GridSpec ga;
  ga.x0 = 2.2;
  ga.x1 = 3.2;
  ga.nx = 4;
  ga.y0 = 1.2;
  ga.y1 = 2.1;
  ga.ny = 4;
  RegionMap ma = scan_static_region(0.25, 1.0, ga, 0);
  for (int j = 0; j < ga.ny; ++j)
    for (int i = 0; i < ga.nx; ++i) {
      CHECK(ma.at(i, j).verdict == CellVerdict::exists_a);
      CHECK(ma.at(i, j).measure > 0.0);
    }

  // V_B: beta < gamma <= 1 with y_P < y_b -> type B balls (nu = 0 keeps the
  // second condition comfortable).
  GridSpec gb;
  gb.x0 = 0.85;
  gb.x1 = 1.0;
  gb.nx = 3;
  gb.y0 = 0.3;
  gb.y1 = 0.6;
  gb.ny = 3;
  RegionMap mb = scan_static_region(0.0, 1.0, gb, 0);
  for (int j = 0; j < gb.ny; ++j)
    for (int i = 0; i < gb.nx; ++i)
      CHECK(mb.at(i, j).verdict == CellVerdict::exists_b);

  // Inadmissible wedge marked as such.
  GridSpec gi;
  gi.x0 = 0.5;
  gi.x1 = 1.0;
  gi.nx = 3;
  gi.y0 = 5.0;
  gi.y1 = 8.0;
  gi.ny = 3;
  RegionMap mi = scan_static_region(0.25, 1.0, gi, 0);
  for (const auto& c : mi.cells) CHECK(c.verdict == CellVerdict::inadmissible);
}

TEST_CASE("gamma_star curve reproduces the reported thresholds") {
  struct Ref {
    double nu, gamma_star;
  };
  for (auto [nu, ref] : {Ref{-0.5, 0.50}, Ref{0.0, 0.92}, Ref{0.25, 1.08},
                         Ref{0.48, 1.19}}) {
    auto pts = scan_gammastar_curve(nu, nu + 1e-9, 2, 1.0, 0, 0.005);
    REQUIRE(pts[0].ok);
    CHECK(std::abs(pts[0].gamma_star - ref) <= 0.05);
  }
}

TEST_CASE("gamma_star curve shape") {
  auto pts = scan_gammastar_curve(-0.6, 0.45, 8, 1.0, 0, 0.01);
  double prev = -1e300;
  for (const auto& p : pts) {
    REQUIRE(p.ok);
    CHECK(p.gamma_star >= prev - 2.0 * p.uncertainty);  // non-decreasing in nu
    prev = p.gamma_star;
  }
  // nu -> 1/2: approaches the fluid threshold 6/5.
  auto lim = scan_gammastar_curve(0.499, 0.499 + 1e-9, 2, 1.0, 0, 0.005);
  REQUIRE(lim[0].ok);
  CHECK(lim[0].gamma_star >= 1.15);
  CHECK(lim[0].gamma_star <= 1.25);
}

TEST_CASE("grid estimate agrees with the bisected gamma_star") {
  GridSpec grid;
  grid.x0 = 0.9;
  grid.x1 = 1.4;
  grid.nx = 26;  // gamma step 0.02
  grid.y0 = 0.5;
  grid.y1 = 1.5;
  grid.ny = 3;
  RegionMap map = scan_static_region(0.25, 1.0, grid, 0);
  REQUIRE(std::isfinite(map.gamma_star_estimate));
  auto pts = scan_gammastar_curve(0.25, 0.25 + 1e-9, 2, 1.0, 0, 0.005);
  CHECK(std::abs(map.gamma_star_estimate - pts[0].gamma_star) <=
        map.gamma_star_uncertainty + 0.01);

  // Resolution convergence: halving the step moves the estimate by less than
  // the coarser uncertainty.
  GridSpec fine = grid;
  fine.nx = 51;  // gamma step 0.01
  RegionMap map2 = scan_static_region(0.25, 1.0, fine, 0);
  REQUIRE(std::isfinite(map2.gamma_star_estimate));
  CHECK(std::abs(map.gamma_star_estimate - map2.gamma_star_estimate) <=
        map.gamma_star_uncertainty);
}

TEST_CASE("homologous threshold scan ordering") {
  const double nus[] = {0.0, 0.25};
  ThresholdScan scan = scan_homologous_threshold(nus, -1.5, -0.75, 2, 1.0, 0);
  REQUIRE(scan.delta_star.size() == 2);
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a) REQUIRE(std::isfinite(scan.delta_star[k][a]));
  // delta_star increases with nu at fixed alpha.
  for (int a = 0; a < 2; ++a) CHECK(scan.delta_star[0][a] < scan.delta_star[1][a]);
  // More violent collapse needs a denser center.
  CHECK(scan.delta_star[0][0] > scan.delta_star[0][1]);
}

TEST_CASE("inequality rasters") {
  GridSpec win;
  win.x0 = win.y0 = 0.1;
  win.x1 = win.y1 = 3.0;
  win.nx = win.ny = 41;

  // Polytropic hyperbolicity: all pass.
  Material mp = Material::make(1.0, 0.25, 2.0, 1.5);
  RegionMap hyper = raster_inequality_region(RasterModel::polytropic,
                                             RasterPredicate::hyperbolicity, mp, win, 0);
  for (const auto& c : hyper.cells) CHECK(c.verdict == CellVerdict::exists_a);

  // Polytropic strong Baker-Ericksen: all-pass iff the analytic predicate.
  GridSpec wide;
  wide.x0 = wide.y0 = 1e-2;
  wide.x1 = wide.y1 = 1e2;
  wide.nx = wide.ny = 41;
  auto all_pass = [&](const Material& m) {
    RegionMap r = raster_inequality_region(RasterModel::polytropic,
                                           RasterPredicate::baker_ericksen, m, wide, 0);
    for (const auto& c : r.cells)
      if (c.verdict != CellVerdict::exists_a) return false;
    return true;
  };
  Material good = Material::make(1.0, 0.25, 2.0, 2.0);
  CHECK(all_pass(good) == strong_be_predicate(0.25, 2.0, 2.0));
  CHECK(all_pass(good));
  Material bad = Material::make(1.0, 0.25, 2.0, 0.5);
  CHECK(all_pass(bad) == strong_be_predicate(0.25, 2.0, 0.5));
  CHECK_FALSE(all_pass(bad));

  // SVK at nu = 1/4: both predicates hold near (1,1) and fail in the window.
  Material msvk = Material::make(1.0, 0.25, 2.0, 1.0);
  for (auto pred : {RasterPredicate::hyperbolicity, RasterPredicate::baker_ericksen}) {
    RegionMap r = raster_inequality_region(RasterModel::svk, pred, msvk, win, 0);
    int iref = static_cast<int>(std::lround((1.0 - win.x0) / (win.x1 - win.x0) *
                                            (win.nx - 1)));
    CHECK(r.at(iref, iref).verdict == CellVerdict::exists_a);
    bool some_fail = false;
    for (const auto& c : r.cells)
      if (c.verdict == CellVerdict::none) some_fail = true;
    CHECK(some_fail);
  }
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.nx = 1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  GridSpec g2;
  g2.x0 = 1.0;
  g2.x1 = 0.5;
  CHECK_THROWS_AS(g2.validate(), std::invalid_argument);
  GridSpec win;
  win.x0 = -1.0;
  win.x1 = 1.0;
  win.nx = win.ny = 4;
  win.y0 = 0.1;
  win.y1 = 1.0;
  Material m = Material::make(1.0, 0.25, 2.0, 1.5);
  CHECK_THROWS_AS(raster_inequality_region(RasterModel::svk,
                                           RasterPredicate::hyperbolicity, m, win, 0),
                  std::domain_error);
}
