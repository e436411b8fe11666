// Benchmark: serial reference vs OpenMP scan kernels.  Verifies the two
// paths produce bit-identical region maps and reports the speedup.

#include <chrono>
#include <cstdio>
#include <string>

#include "polyball/atlas.hpp"

using namespace polyball;

namespace {

double time_ms(int workers, const GridSpec& grid, double nu, RegionMap& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = scan_static_region(nu, 1.0, grid, workers);
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 24;
  int workers = argc > 2 ? std::atoi(argv[2]) : default_workers();
  GridSpec grid;
  grid.x0 = 0.4;
  grid.x1 = 3.0;
  grid.nx = n;
  grid.y0 = -1.0;
  grid.y1 = 3.0;
  grid.ny = n;

  std::printf("static existence scan, %dx%d cells, nu = 0.25\n", n, n);
  RegionMap serial, parallel;
  const double t_serial = time_ms(1, grid, 0.25, serial);
  std::printf("  serial reference: %8.1f ms\n", t_serial);
  const double t_par = time_ms(workers, grid, 0.25, parallel);
  std::printf("  %2d workers:       %8.1f ms  (speedup %.2fx)\n", workers, t_par,
              t_serial / t_par);
  if (!same_cells(serial, parallel)) {
    std::printf("MISMATCH: serial and parallel maps differ\n");
    return 1;
  }
  std::printf("  maps identical: yes\n");

  GridSpec win;
  win.x0 = win.y0 = 0.05;
  win.x1 = win.y1 = 4.0;
  win.nx = win.ny = 512;
  Material mat = Material::make(1.0, 0.25, 2.0, 1.0);
  RegionMap rs, rp;
  const auto t0 = std::chrono::steady_clock::now();
  rs = raster_inequality_region(RasterModel::svk, RasterPredicate::baker_ericksen,
                                mat, win, 1);
  const double r_serial =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  const auto t1 = std::chrono::steady_clock::now();
  rp = raster_inequality_region(RasterModel::svk, RasterPredicate::baker_ericksen,
                                mat, win, workers);
  const double r_par =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t1)
          .count();
  std::printf("svk raster, %dx%d pixels\n", win.nx, win.ny);
  std::printf("  serial reference: %8.1f ms\n", r_serial);
  std::printf("  %2d workers:       %8.1f ms  (speedup %.2fx)\n", workers, r_par,
              r_serial / r_par);
  if (!same_cells(rs, rp)) {
    std::printf("MISMATCH: serial and parallel rasters differ\n");
    return 1;
  }
  std::printf("  maps identical: yes\n");
  return 0;
}
