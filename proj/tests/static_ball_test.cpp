#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polyball/radial_system.hpp"
#include "polyball/static_ball.hpp"

using namespace polyball;

namespace {

// Independent Lane-Emden oracle: theta'' + (2/xi) theta' + theta^n = 0,
// integrated with fixed-step classical RK4 from the series start.
struct LaneEmden {
  std::vector<double> xi, th;
  double index;
  LaneEmden(double n, double h, double xi_max) : index(n) {
    double x = 0.01;  // series start well clear of the coordinate singularity
    double t = 1.0 - x * x / 6.0 + n * std::pow(x, 4) / 120.0;
    double dt = -x / 3.0 + n * std::pow(x, 3) / 30.0;
    auto f = [n](double xx, double tt, double dd, double& ft, double& fd) {
      ft = dd;
      fd = -2.0 / xx * dd - (tt > 0.0 ? std::pow(tt, n) : 0.0);
    };
    while (x < xi_max) {  // continue smoothly past the zero so the grid brackets it
      xi.push_back(x);
      th.push_back(t);
      double k1t, k1d, k2t, k2d, k3t, k3d, k4t, k4d;
      f(x, t, dt, k1t, k1d);
      f(x + h / 2, t + h / 2 * k1t, dt + h / 2 * k1d, k2t, k2d);
      f(x + h / 2, t + h / 2 * k2t, dt + h / 2 * k2d, k3t, k3d);
      f(x + h, t + h * k3t, dt + h * k3d, k4t, k4d);
      t += h / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t);
      dt += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
      x += h;
    }
  }
  double operator()(double x) const {
    if (x < xi.front()) return 1.0 - x * x / 6.0 + index * std::pow(x, 4) / 120.0;
    auto it = std::lower_bound(xi.begin(), xi.end(), x);
    if (it == xi.begin() || it == xi.end()) return (it == xi.begin()) ? th.front() : th.back();
    std::size_t i = static_cast<std::size_t>(it - xi.begin());
    double w = (x - xi[i - 1]) / (xi[i] - xi[i - 1]);
    return (1.0 - w) * th[i - 1] + w * th[i];
  }
};

double interp_delta(const BallProfile& p, double r) {
  auto cmp = [](const ProfileSample& s, double x) { return s.r < x; };
  auto it = std::lower_bound(p.samples.begin(), p.samples.end(), r, cmp);
  if (it == p.samples.begin() || it == p.samples.end()) return it->delta;
  auto prev = it - 1;
  double w = (r - prev->r) / (it->r - prev->r);
  return (1.0 - w) * prev->delta + w * it->delta;
}

}  // namespace

TEST_CASE("series start matches the strongly regular expansion") {
  Material m = Material::make(1.0, 0.25, 3.0, 2.0);
  CenterData c{1.0};
  const double r0 = 1e-3;
  StrainState s = series_start(c, m, r0);
  // gamma = 3, delta_c = 1, theta = 1: delta(r0) = 1 - r0^2/2.
  CHECK(s.delta == doctest::Approx(1.0 - r0 * r0 / 2.0).epsilon(1e-12));
  CHECK(s.eta - 1.0 == doctest::Approx(0.6 * (s.delta - 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(series_start(c, m, -1.0), std::domain_error);
}

TEST_CASE("fluid ball reproduces the Lane-Emden n=1 polytrope") {
  Material m = Material::make(1.0, 0.5, 2.0, 2.0);
  BallProfile p = integrate_static(CenterData{1.0}, m);

  REQUIRE(p.boundary_found());
  CHECK(p.stop == StopReason::density_floor);
  CHECK(p.type == BallType::type_a);
  // Analytic solution sin(xi)/xi with xi = sqrt(3) r: first zero at xi = pi.
  CHECK(p.R == doctest::Approx(M_PI / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(p.samples.back().delta <= 1e-6);  // density -> 0 at the boundary

  LaneEmden le(1.0, 2e-4, 3.4);
  double worst_analytic = 0.0, worst_rk4 = 0.0;
  for (const auto& s : p.samples) {
    const double xi = std::sqrt(3.0) * s.r;
    worst_analytic = std::max(worst_analytic, std::abs(s.delta - std::sin(xi) / xi));
    worst_rk4 = std::max(worst_rk4, std::abs(s.delta - le(xi)));
  }
  CHECK(worst_analytic <= 1e-6);
  CHECK(worst_rk4 <= 1e-6);
}

TEST_CASE("analytic existence regions: type A and type B") {
  // gamma > 2, 1 < beta <= gamma -> type A.
  for (auto [nu, g, b] : {std::tuple{0.25, 3.0, 2.0}, std::tuple{0.0, 2.5, 1.5}}) {
    Material m = Material::make(1.0, nu, g, b);
    BallProfile p = integrate_static(CenterData{1.0}, m);
    REQUIRE(p.boundary_found());
    CHECK(p.stop == StopReason::boundary_shear);
    CHECK(p.type == BallType::type_a);
    CHECK(std::isfinite(p.R_max_hint));
    CHECK(p.R_max_hint > p.R);
  }
  // (gamma=1, beta=0.5, nu=0): type B with y -> 1/3.
  Material mb = Material::make(1.0, 0.0, 1.0, 0.5);
  BallProfile pb = integrate_static(CenterData{1.0}, mb);
  REQUIRE(pb.boundary_found());
  CHECK(pb.type == BallType::type_b);
  CHECK_FALSE(pb.type_warning);
  CHECK(pb.y_infinity == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("profile invariants") {
  for (auto [nu, g, b, dc] : {std::tuple{0.25, 3.0, 2.0, 1.0},
                              std::tuple{0.0, 1.0, 0.5, 2.0},
                              std::tuple{0.3, 2.2, 1.0, 0.5}}) {
    Material m = Material::make(1.0, nu, g, b);
    BallProfile p = integrate_static(CenterData{dc}, m);
    REQUIRE(p.boundary_found());
    double prev_eta = 1e300, prev_y = 1e300;
    for (const auto& s : p.samples) {
      CHECK(s.eta >= s.delta - 1e-12);           // eta > delta inside
      CHECK(s.eta <= prev_eta * (1.0 + 1e-12));  // eta non-increasing
      CHECK(s.y <= prev_y * (1.0 + 1e-9));       // shear decreasing to y_b
      CHECK(s.F_tan >= s.F_rad - 1e-10);         // weak Baker-Ericksen
      prev_eta = s.eta;
      prev_y = s.y;
    }
    // F_rad positive inside, zero at the boundary.
    for (std::size_t i = 0; i + 1 < p.samples.size(); ++i)
      CHECK(p.samples[i].F_rad > -1e-12);
    CHECK(std::abs(p.samples.back().F_rad) <= 1e-9);
    // Shear at the boundary equals y_b.
    CHECK(p.samples.back().y == doctest::Approx(m.boundary_shear()).epsilon(1e-9));
  }
}

TEST_CASE("center regularity from the first samples") {
  Material m = Material::make(1.0, 0.25, 2.0, 1.5);
  BallProfile p = integrate_static(CenterData{1.0}, m);
  // eta''(0)/delta''(0) = 3/5 via the ratio of the quadratic corrections,
  // Richardson-extrapolated from two small radii.
  auto ratio_at = [&](double r) {
    double d = interp_delta(p, r);
    // recompute eta by a second interpolation pass
    auto cmp = [](const ProfileSample& s, double x) { return s.r < x; };
    auto it = std::lower_bound(p.samples.begin(), p.samples.end(), r, cmp);
    auto prev = it - 1;
    double w = (r - prev->r) / (it->r - prev->r);
    double e = (1.0 - w) * prev->eta + w * it->eta;
    return (e - 1.0) / (d - 1.0);
  };
  const double r1 = 0.02, r2 = 0.01;
  const double extrap = (4.0 * ratio_at(r2) - ratio_at(r1)) / 3.0;
  CHECK(extrap == doctest::Approx(0.6).epsilon(1e-3));
  // |delta'| <= C r near the center.
  for (std::size_t i = 1; i < p.samples.size() && p.samples[i].r < 0.3; ++i) {
    const auto &a = p.samples[i - 1], &bqs = p.samples[i];
    double slope = std::abs(bqs.delta - a.delta) / (bqs.r - a.r);
    CHECK(slope <= 2.0 * bqs.r);  // C = 2 dominates theta*delta_c here
  }
}

TEST_CASE("hydrostatic residual of the pressure-form equation") {
  // d F_rad/dr = 2 (F_tan - F_rad)/r - 3 theta (1-nu)/(1+nu) r eta delta,
  // with the pressure partials taken by finite differences and the slopes
  // from the integrated system.
  for (auto [nu, g, b] : {std::tuple{0.25, 3.0, 2.0}, std::tuple{0.0, 1.0, 0.5}}) {
    Material m = Material::make(1.0, nu, g, b);
    BallProfile p = integrate_static(CenterData{1.0}, m);
    REQUIRE(p.boundary_found());
    RadialSystem sys(m);
    const double h = 1e-5;
    auto prad = [&](double d, double e) { return p_hat(m, StrainState(d, e)).rad; };
    for (std::size_t i = 2; i + 2 < p.samples.size(); i += 7) {
      const auto& s = p.samples[i];
      ode::State<2> st{sys.encode(s.delta), s.eta};
      ode::State<2> ds;
      sys(s.r, st, ds);
      const double ddelta = sys.w_chart()
                                ? ds[0] * std::pow(s.delta, 1.0 - m.beta) / m.beta
                                : ds[0];
      const double deta = ds[1];
      const double pd = (-prad(s.delta + 2 * h, s.eta) + 8 * prad(s.delta + h, s.eta) -
                         8 * prad(s.delta - h, s.eta) + prad(s.delta - 2 * h, s.eta)) /
                        (12 * h);
      const double pe = (-prad(s.delta, s.eta + 2 * h) + 8 * prad(s.delta, s.eta + h) -
                         8 * prad(s.delta, s.eta - h) + prad(s.delta, s.eta - 2 * h)) /
                        (12 * h);
      const double lhs = pd * ddelta + pe * deta;
      const double rhs = 2.0 * (s.F_tan - s.F_rad) / s.r -
                         3.0 * m.theta * m.cnu() * s.r * s.eta * s.delta;
      const double weight = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      CHECK(std::abs(lhs - rhs) / weight <= 1e-9);
    }
  }
}

TEST_CASE("scale covariance in theta") {
  Material m1 = Material::make(1.0, 0.25, 3.0, 2.0, 1.0);
  Material m4 = Material::make(1.0, 0.25, 3.0, 2.0, 4.0);
  BallProfile p1 = integrate_static(CenterData{1.0}, m1);
  BallProfile p4 = integrate_static(CenterData{1.0}, m4);
  REQUIRE(p1.boundary_found());
  REQUIRE(p4.boundary_found());
  // r -> r / sqrt(theta): radii halve, profiles overlay.
  CHECK(p4.R == doctest::Approx(p1.R / 2.0).epsilon(1e-9));
  for (double frac : {0.2, 0.5, 0.8}) {
    double d1 = interp_delta(p1, frac * p1.R);
    double d4 = interp_delta(p4, frac * p4.R);
    CHECK(d4 == doctest::Approx(d1).epsilon(1e-6));
  }
}

TEST_CASE("zero-boundary-shear elastic ball") {
  Material m = Material::make(1.0, 0.25, 2.0, 3.0 * 2.0 * 0.6);  // beta on the zero-shear line
  REQUIRE(m.zero_boundary_shear());
  BallProfile p = integrate_static(CenterData{1.0}, m);
  REQUIRE(p.boundary_found());
  CHECK(p.stop == StopReason::density_floor);
  CHECK(p.type == BallType::type_a);
  CHECK(p.samples.back().delta <= 1e-3);  // beta = 3.6: steep touchdown in r
  CHECK(p.R > p.samples.back().r);
}

TEST_CASE("classify_type rejects boundary-less profiles") {
  Material m = Material::make(1.0, 0.25, 1.05, 0.1);
  SolveOptions o;
  o.r_max = 5.0;  // too short for anything to happen
  BallProfile p = integrate_static(CenterData{1.0}, m, o);
  if (!p.boundary_found()) CHECK_THROWS_AS(classify_type(p, m), std::invalid_argument);
}
