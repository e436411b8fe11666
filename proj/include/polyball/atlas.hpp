#ifndef POLYBALL_ATLAS_HPP
#define POLYBALL_ATLAS_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polyball/constitutive.hpp"
#include "polyball/static_ball.hpp"

namespace polyball {

/// Rectangular scan grid.  Cells are evaluated independently; the per-cell
/// timeout is a deterministic integrator step budget so identical grids give
/// bit-identical maps regardless of the worker count.
struct GridSpec {
  double x0 = 0.0, x1 = 1.0;
  int nx = 2;
  double y0 = 0.0, y1 = 1.0;
  int ny = 2;
  std::uint64_t cell_step_budget = 400000;
  // Existence cutoff in rescaled radial units: near the existence boundary
  // the ball radius grows without bound, so the cutoff location defines the
  // measured threshold.  Balls larger than this are counted as censored.
  double existence_radius_cutoff = 150.0;
  SolveOptions solver;

  double x_at(int i) const { return nx < 2 ? x0 : x0 + (x1 - x0) * i / (nx - 1); }
  double y_at(int j) const { return ny < 2 ? y0 : y0 + (y1 - y0) * j / (ny - 1); }
  void validate() const;
};

enum class CellVerdict : std::uint8_t {
  exists_a,
  exists_b,
  none,          // horizon-censored nonexistence (or failed raster predicate)
  inadmissible,  // outside beta <= 3 gamma (1-nu)/(1+nu) or beta = 0
  timeout        // per-cell step budget exhausted
};

const char* to_string(CellVerdict v);

struct Cell {
  CellVerdict verdict = CellVerdict::none;
  double measure = 0.0;  // ball radius when it exists, horizon when censored
  std::uint32_t steps = 0;
  bool warning = false;
};

struct RegionMap {
  GridSpec grid;
  std::vector<Cell> cells;  // row-major, index j*nx + i
  double gamma_star_estimate = std::numeric_limits<double>::quiet_NaN();
  double gamma_star_uncertainty = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;  // informational only, excluded from equality

  const Cell& at(int i, int j) const
  {
    return cells[static_cast<std::size_t>(j) * grid.nx + i];
  }
};

/// Verdict/measure/step equality (wall time excluded): the determinism
/// contract between serial and parallel runs.
bool same_cells(const RegionMap& a, const RegionMap& b);

/// Worker count: explicit argument > 0 wins, else POLYBALL_WORKERS, else the
/// hardware concurrency.
int default_workers();

/// Existence of a static ball along the zero-boundary-shear line
/// beta = 3 gamma (1-nu)/(1+nu) at unit central density, with the ball radius
/// capped at radius_cutoff rescaled units.
bool zero_shear_ball_exists(double nu, double gamma, double theta,
                            const SolveOptions& solver = {},
                            std::uint64_t step_budget = 400000,
                            double radius_cutoff = 150.0);

/// Static existence region in the (gamma, beta) plane at fixed nu: runs
/// integrate_static per admissible cell and classifies A/B.  Also estimates
/// gamma_star, the smallest gamma whose zero-shear ball exists, by scanning
/// the grid's gamma axis along the zero-shear line.
RegionMap scan_static_region(double nu, double theta, const GridSpec& grid,
                             int workers = 0);

struct GammaStarPoint {
  double nu;
  double gamma_star;
  double uncertainty;
  bool ok;
};

/// Zero-shear existence threshold gamma_star(nu), bisected per nu sample.
std::vector<GammaStarPoint> scan_gammastar_curve(double nu_lo, double nu_hi, int n,
                                                 double theta, int workers = 0,
                                                 double gamma_tol = 0.01);

struct ThresholdScan {
  std::vector<double> nus;
  std::vector<double> alphas;
  // delta_star[k][a] for nus[k], alphas[a]; NaN when bracketing failed.
  std::vector<std::vector<double>> delta_star;
};

/// Collapse threshold delta_star(alpha, nu) for zero-boundary-shear
/// homologous balls over an alpha grid (alpha < 0).
ThresholdScan scan_homologous_threshold(std::span<const double> nus,
                                        double alpha_lo, double alpha_hi,
                                        int n_alpha, double theta,
                                        int workers = 0);

enum class RasterModel { polytropic, svk };
enum class RasterPredicate { hyperbolicity, baker_ericksen };

/// Per-pixel constitutive-inequality raster over a (delta, eta) window;
/// verdict exists_a marks a passing pixel, none a failing one.
RegionMap raster_inequality_region(RasterModel model, RasterPredicate predicate,
                                   const Material& mat, const GridSpec& window,
                                   int workers = 0);

}  // namespace polyball

#endif
