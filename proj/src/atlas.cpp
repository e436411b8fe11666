#include "polyball/atlas.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polyball/homologous.hpp"
#include "polyball/radial_system.hpp"

namespace polyball {

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid: resolutions >= 2 required");
  if (!(x1 > x0) || !(y1 > y0) || !std::isfinite(x0) || !std::isfinite(x1) ||
      !std::isfinite(y0) || !std::isfinite(y1))
    throw std::invalid_argument("grid: finite increasing ranges required");
}

const char* to_string(CellVerdict v) {
  switch (v) {
    case CellVerdict::exists_a: return "exists-A";
    case CellVerdict::exists_b: return "exists-B";
    case CellVerdict::none: return "none";
    case CellVerdict::inadmissible: return "inadmissible";
    case CellVerdict::timeout: return "timeout";
  }
  return "?";
}

bool same_cells(const RegionMap& a, const RegionMap& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const Cell &ca = a.cells[k], &cb = b.cells[k];
    if (ca.verdict != cb.verdict || ca.measure != cb.measure ||
        ca.steps != cb.steps || ca.warning != cb.warning)
      return false;
  }
  return true;
}

int default_workers() {
  if (const char* env = std::getenv("POLYBALL_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

/// Independent map over n cells: a plain serial loop (the reference
/// implementation) or an OpenMP pool.  Each cell writes only its own slot, so
/// results are identical for any worker count.
void for_each_cell(int n, int workers, const std::function<void(int)>& body) {
#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
#else
  (void)workers;
#endif
  for (int k = 0; k < n; ++k) body(k);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
  }
};

Cell existence_cell(double nu, double gamma, double beta, double theta,
                    const SolveOptions& solver, std::uint64_t budget,
                    double radius_cutoff) {
  Cell cell;
  if (beta == 0.0 || beta > 3.0 * gamma * poisson_factor(nu) * (1.0 + 1e-12)) {
    cell.verdict = CellVerdict::inadmissible;
    return cell;
  }
  Material mat = Material::make(1.0, nu, gamma, beta, theta);
  SolveOptions o = solver;
  o.record = false;
  o.classify = true;
  o.max_steps = budget;
  if (o.r_max <= 0.0)
    o.r_max = radius_cutoff * RadialSystem(mat).radial_scale(1.0);
  BallProfile p = integrate_static(CenterData{1.0}, mat, o);
  cell.steps = static_cast<std::uint32_t>(p.steps);
  cell.warning = p.type_warning;
  if (p.boundary_found() && p.pressures_positive()) {
    cell.verdict = p.type == BallType::type_b ? CellVerdict::exists_b
                                              : CellVerdict::exists_a;
    cell.measure = p.R;
  } else if (p.stop == StopReason::horizon || p.stop == StopReason::stalled) {
    cell.verdict = CellVerdict::none;
    cell.measure = p.horizon;
  } else if (p.boundary_found()) {
    cell.verdict = CellVerdict::none;  // pressure positivity violated inside
    cell.measure = p.horizon;
  } else {
    cell.verdict = CellVerdict::timeout;
    cell.measure = p.horizon;
  }
  return cell;
}

}  // namespace

bool zero_shear_ball_exists(double nu, double gamma, double theta,
                            const SolveOptions& solver, std::uint64_t step_budget,
                            double radius_cutoff) {
  Material mat = Material::make(1.0, nu, gamma, 3.0 * gamma * poisson_factor(nu),
                                theta);
  SolveOptions o = solver;
  o.record = false;
  o.classify = false;
  o.max_steps = step_budget;
  if (o.r_max <= 0.0)
    o.r_max = radius_cutoff * RadialSystem(mat).radial_scale(1.0);
  BallProfile p = integrate_static(CenterData{1.0}, mat, o);
  return p.boundary_found() && p.pressures_positive();
}

RegionMap scan_static_region(double nu, double theta, const GridSpec& grid,
                             int workers) {
  grid.validate();
  if (!(nu > -1.0 && nu <= 0.5))
    throw std::domain_error("scan_static_region: nu must lie in (-1, 1/2]");
  if (workers <= 0) workers = default_workers();
  Timer timer;

  RegionMap map;
  map.grid = grid;
  map.cells.resize(static_cast<std::size_t>(grid.nx) * grid.ny);
  for_each_cell(grid.nx * grid.ny, workers, [&](int k) {
    const int i = k % grid.nx, j = k / grid.nx;
    map.cells[k] = existence_cell(nu, grid.x_at(i), grid.y_at(j), theta,
                                  grid.solver, grid.cell_step_budget,
                                  grid.existence_radius_cutoff);
  });

  // gamma_star estimate: first gamma column whose zero-shear ball exists.
  std::vector<char> zs(grid.nx, 0);
  for_each_cell(grid.nx, workers, [&](int i) {
    zs[i] = zero_shear_ball_exists(nu, grid.x_at(i), theta, grid.solver,
                                   grid.cell_step_budget,
                                   grid.existence_radius_cutoff)
                ? 1
                : 0;
  });
  for (int i = 1; i < grid.nx; ++i) {
    if (!zs[i - 1] && zs[i]) {
      map.gamma_star_estimate = 0.5 * (grid.x_at(i - 1) + grid.x_at(i));
      map.gamma_star_uncertainty = grid.x_at(i) - grid.x_at(i - 1);
      break;
    }
  }
  map.wall_ms = timer.ms();
  return map;
}

std::vector<GammaStarPoint> scan_gammastar_curve(double nu_lo, double nu_hi, int n,
                                                 double theta, int workers,
                                                 double gamma_tol) {
  if (!(nu_lo > -1.0 && nu_hi < 0.5 && nu_hi >= nu_lo))
    throw std::domain_error("scan_gammastar_curve: nu range within (-1, 1/2)");
  if (n < 2) throw std::invalid_argument("scan_gammastar_curve: n >= 2");
  if (workers <= 0) workers = default_workers();

  std::vector<GammaStarPoint> out(n);
  for_each_cell(n, workers, [&](int k) {
    const double nu = nu_lo + (nu_hi - nu_lo) * k / (n - 1);
    GammaStarPoint pt{nu, std::numeric_limits<double>::quiet_NaN(), gamma_tol, false};
    double lo = 0.02, hi = 2.5;
    if (!zero_shear_ball_exists(nu, hi, theta) || zero_shear_ball_exists(nu, lo, theta)) {
      out[k] = pt;
      return;
    }
    while (hi - lo > gamma_tol) {
      const double mid = 0.5 * (lo + hi);
      (zero_shear_ball_exists(nu, mid, theta) ? hi : lo) = mid;
    }
    pt.gamma_star = 0.5 * (lo + hi);
    pt.ok = true;
    out[k] = pt;
  });
  return out;
}

ThresholdScan scan_homologous_threshold(std::span<const double> nus, double alpha_lo,
                                        double alpha_hi, int n_alpha, double theta,
                                        int workers) {
  if (!(alpha_lo < 0.0 && alpha_hi < 0.0))
    throw std::domain_error("scan_homologous_threshold: alpha range must be negative");
  if (n_alpha < 1) throw std::invalid_argument("scan_homologous_threshold: n_alpha >= 1");
  if (workers <= 0) workers = default_workers();

  ThresholdScan scan;
  scan.nus.assign(nus.begin(), nus.end());
  scan.alphas.resize(n_alpha);
  for (int a = 0; a < n_alpha; ++a)
    scan.alphas[a] = n_alpha == 1
                         ? alpha_lo
                         : alpha_lo + (alpha_hi - alpha_lo) * a / (n_alpha - 1);
  scan.delta_star.assign(nus.size(),
                         std::vector<double>(n_alpha,
                                             std::numeric_limits<double>::quiet_NaN()));

  const int total = static_cast<int>(nus.size()) * n_alpha;
  for_each_cell(total, workers, [&](int k) {
    const int ki = k / n_alpha, a = k % n_alpha;
    const double nu = scan.nus[ki], alpha = scan.alphas[a];
    // Expand a bracket around the threshold, then bisect.
    const double beta = 4.0 * poisson_factor(nu);
    Material mat = Material::make(1.0, nu, 4.0 / 3.0, beta, theta);
    SolveOptions o;
    o.record = false;
    o.classify = false;
    auto exists = [&](double dc) {
      SelfSimilarProfile p =
          integrate_profile(HomologousParams::make(mat, alpha, dc), o);
      return p.boundary_found() && p.pressures_positive();
    };
    double hi = 10.0 * std::abs(alpha);
    int guard = 0;
    while (!exists(hi) && guard++ < 24) hi *= 2.0;
    if (guard > 24) return;
    double lo = hi / 2.0;
    guard = 0;
    while (exists(lo) && guard++ < 40) lo /= 2.0;
    if (guard > 40) return;
    while (hi - lo > 1e-3 * hi) {
      const double mid = 0.5 * (lo + hi);
      (exists(mid) ? hi : lo) = mid;
    }
    scan.delta_star[ki][a] = 0.5 * (lo + hi);
  });
  return scan;
}

RegionMap raster_inequality_region(RasterModel model, RasterPredicate predicate,
                                   const Material& mat, const GridSpec& window,
                                   int workers) {
  window.validate();
  if (!(window.x0 > 0.0 && window.y0 > 0.0))
    throw std::domain_error("raster window must lie in (0,inf)^2");
  if (workers <= 0) workers = default_workers();
  Timer timer;

  RegionMap map;
  map.grid = window;
  map.cells.resize(static_cast<std::size_t>(window.nx) * window.ny);
  for_each_cell(window.nx * window.ny, workers, [&](int k) {
    const int i = k % window.nx, j = k / window.nx;
    StrainState s(window.x_at(i), window.y_at(j));
    bool pass = true;
    double measure = 0.0;
    if (model == RasterModel::polytropic) {
      if (predicate == RasterPredicate::hyperbolicity) {
        measure = coeff_a(mat, s);
        pass = measure > 0.0;
      } else {
        measure = Q_func(mat, s.y);
        pass = measure >= -kInequalityTol;
      }
    } else {
      SvkEval e = svk_eval(mat.nu, mat.kappa, s);
      if (predicate == RasterPredicate::hyperbolicity) {
        measure = e.a;
        pass = measure > 0.0;
      } else {
        // (p_tan - p_rad)/(eta - delta) >= 0, removable on the diagonal.
        const double gap = s.eta - s.delta;
        if (std::abs(gap) <= 1e-9 * (s.eta + s.delta)) {
          pass = true;
        } else {
          measure = (e.p_tan - e.p_rad) / gap;
          pass = measure >= -kInequalityTol * std::max(1.0, std::abs(e.p_rad));
        }
      }
    }
    map.cells[k].verdict = pass ? CellVerdict::exists_a : CellVerdict::none;
    map.cells[k].measure = measure;
  });
  map.wall_ms = timer.ms();
  return map;
}

}  // namespace polyball
