#include "polyball/phase_portrait.hpp"

#include <cmath>

#include "polyball/constitutive.hpp"
#include "polyball/ode.hpp"

namespace polyball {

double upsilon(const Material& mat, double y) {
  if (!(y > 0.0)) throw std::domain_error("upsilon: y must be positive");
  return 3.0 * (1.0 - y) +
         3.0 * (mat.beta - mat.gamma) * B_func_raw(mat.beta, y) * std::pow(y, -mat.beta);
}

namespace {

double upsilon_prime(const Material& mat, double y) {
  const double b = mat.beta;
  return -3.0 + 3.0 * (b - mat.gamma) * std::pow(y, -b) *
                    (B_prime_raw(b, y) - b * B_func_raw(b, y) / y);
}

/// Upsilon(0) = 3 (1-gamma)/(1-beta), the beta < 1 limit.
double upsilon_at_zero(const Material& mat) {
  return 3.0 * (1.0 - mat.gamma) / (1.0 - mat.beta);
}

struct Eigen2 {
  std::array<double, 2> re{}, im{};
  std::array<std::array<double, 2>, 2> vec{};
  bool vec_valid = false;
};

Eigen2 eigen2(const std::array<std::array<double, 2>, 2>& J) {
  Eigen2 e;
  const double tr = J[0][0] + J[1][1];
  const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    e.re = {(tr - s) / 2.0, (tr + s) / 2.0};
    e.im = {0.0, 0.0};
    e.vec_valid = true;
    for (int k = 0; k < 2; ++k) {
      const double lam = e.re[k];
      // Null vector of J - lam I from the better-conditioned row.
      double w0, w1;
      if (std::abs(J[0][0] - lam) + std::abs(J[0][1]) >=
          std::abs(J[1][0]) + std::abs(J[1][1] - lam)) {
        w0 = J[0][1];
        w1 = lam - J[0][0];
        if (w0 == 0.0 && w1 == 0.0) w0 = 1.0;
      } else {
        w0 = lam - J[1][1];
        w1 = J[1][0];
        if (w0 == 0.0 && w1 == 0.0) w1 = 1.0;
      }
      const double n = std::hypot(w0, w1);
      e.vec[k] = {w0 / n, w1 / n};
    }
  } else {
    const double s = std::sqrt(-disc);
    e.re = {tr / 2.0, tr / 2.0};
    e.im = {-s / 2.0, s / 2.0};
  }
  return e;
}

FixedPointClass classify_eigen(const Eigen2& e) {
  const double tol = 1e-12;
  if (e.im[0] == 0.0) {
    if (e.re[0] * e.re[1] < -tol) return FixedPointClass::saddle;
    if (e.re[0] < -tol && e.re[1] < -tol) return FixedPointClass::sink;
    if (e.re[0] > tol && e.re[1] > tol) return FixedPointClass::source;
    return FixedPointClass::center_like;
  }
  if (e.re[0] < -tol) return FixedPointClass::sink;
  if (e.re[0] > tol) return FixedPointClass::source;
  return FixedPointClass::center_like;
}

}  // namespace

std::array<double, 2> phase_vector_field(const Material& mat, double y, double v) {
  const double ups = upsilon(mat, y);
  return {(ups - v) * y,
          ((1.0 - mat.beta) * (ups - v) + 2.0 - 3.0 * (2.0 - mat.gamma) * (1.0 - y)) * v};
}

std::array<std::array<double, 2>, 2> phase_jacobian(const Material& mat, double y,
                                                    double v) {
  const double ups = upsilon(mat, y);
  const double dups = upsilon_prime(mat, y);
  return {{{dups * y + ups - v, -y},
           {(1.0 - mat.beta) * dups * v + 3.0 * (2.0 - mat.gamma) * v,
            (1.0 - mat.beta) * (ups - 2.0 * v) + 2.0 - 3.0 * (2.0 - mat.gamma) * (1.0 - y)}}};
}

std::vector<FixedPointRecord> fixed_points(const Material& mat) {
  if (std::abs(mat.gamma - 2.0) < 1e-12)
    throw std::domain_error(
        "fixed_points: gamma = 2 degenerates the (y,v) chart; use "
        "track_shear_gamma2");
  std::vector<FixedPointRecord> out;

  {
    // The Jacobian at O is [[-3, -1], [0, 2]] for every (gamma, beta):
    // Upsilon(1) = 0 and Upsilon'(1) = -3 identically.
    FixedPointRecord O;
    O.name = 'O';
    O.y = 1.0;
    O.v = 0.0;
    O.eig_re = {-3.0, 2.0};
    O.eig_im = {0.0, 0.0};
    const double n = std::sqrt(26.0);
    O.eigvec = {{{1.0, 0.0}, {1.0 / n, -5.0 / n}}};
    O.eigvec_valid = true;
    O.cls = FixedPointClass::saddle;
    auto F = phase_vector_field(mat, 1.0, 0.0);
    O.field_residual = std::hypot(F[0], F[1]);
    out.push_back(O);
  }

  {
    FixedPointRecord Q;
    Q.name = 'Q';
    Q.y = 0.0;
    Q.v = 0.0;
    Q.field_residual = 0.0;  // both components carry a factor y or v
    if (mat.beta < 1.0) {
      // Limit Jacobian at the origin: diag(Upsilon(0),
      // (1-beta) Upsilon(0) + 2 - 3(2-gamma)).
      const double u0 = upsilon_at_zero(mat);
      std::array<std::array<double, 2>, 2> J{
          {{u0, 0.0}, {0.0, (1.0 - mat.beta) * u0 + 2.0 - 3.0 * (2.0 - mat.gamma)}}};
      Eigen2 e = eigen2(J);
      Q.eig_re = e.re;
      Q.eig_im = e.im;
      Q.eigvec = e.vec;
      Q.eigvec_valid = e.vec_valid;
      Q.cls = classify_eigen(e);
    } else {
      Q.eigen_valid = false;  // field not C^1 at the origin for beta >= 1
    }
    out.push_back(Q);
  }

  const double yp = y_sink(mat.gamma);
  if (yp > 1e-9 && yp < 1.0 - 1e-9) {
    FixedPointRecord P;
    P.name = 'P';
    P.y = yp;
    P.v = upsilon(mat, yp);
    auto J = phase_jacobian(mat, P.y, P.v);
    Eigen2 e = eigen2(J);
    P.eig_re = e.re;
    P.eig_im = e.im;
    P.eigvec = e.vec;
    P.eigvec_valid = e.vec_valid;
    P.cls = classify_eigen(e);
    auto F = phase_vector_field(mat, P.y, P.v);
    P.field_residual = std::hypot(F[0], F[1]);
    out.push_back(P);
  }
  return out;
}

PhaseOrbit track_gamma(const Material& mat, double C, double xi_end,
                       const SolveOptions& opts, double seed_amplitude) {
  if (!(C > 0.0)) throw std::domain_error("track_gamma: C must be positive");
  if (!(seed_amplitude > 0.0 && seed_amplitude < 1e-4))
    throw std::domain_error("track_gamma: seed amplitude out of range");
  PhaseOrbit orbit;

  // Integrate in (u, v) with u = 1 - y so relative error control resolves the
  // small unstable-manifold amplitude near the saddle.
  auto f = [&mat](double, const ode::State<2>& s, ode::State<2>& ds) {
    const double y = 1.0 - s[0], v = s[1];
    if (!(y > 0.0) || !(v > 0.0)) {
      ds[0] = ds[1] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const double ups = upsilon(mat, y);
    ds[0] = -(ups - v) * y;
    ds[1] = ((1.0 - mat.beta) * (ups - v) + 2.0 - 3.0 * (2.0 - mat.gamma) * (1.0 - y)) * v;
  };

  // Unstable-manifold asymptotics: v ~ C e^(2 xi), 1 - y ~ (C/5) e^(2 xi).
  const double amp = seed_amplitude;
  const double xi0 = 0.5 * std::log(amp / C);
  ode::State<2> s0{amp / 5.0, amp};

  std::vector<ode::Event<2>> events;
  const int idx_exit_y = 0;
  events.push_back({[](double, const ode::State<2>& s) { return s[0]; }, -1});
  const int idx_exit_v = 1;
  events.push_back({[](double, const ode::State<2>& s) { return s[1]; }, -1});
  const int idx_collapse = 2;
  events.push_back(
      {[](double, const ode::State<2>& s) { return (1.0 - s[0]) - 1e-10; }, -1});
  const int idx_stall = 3;
  events.push_back({[&f](double xi, const ode::State<2>& s) {
                      ode::State<2> ds;
                      f(xi, s, ds);
                      return std::abs(ds[0]) + std::abs(ds[1]) / (1.0 + s[1]) - 1e-13;
                    },
                    -1});

  ode::Options oo;
  oo.rtol = opts.rtol;
  // Absolute control far below the seed amplitude, or it corrupts the
  // unstable-manifold amplitude during the exponential stretch.
  oo.atol = std::min(1e-16, 1e-9 * amp);
  oo.max_steps = opts.max_steps;

  std::function<void(const ode::Sample<2>&)> obs = [&](const ode::Sample<2>& s) {
    orbit.samples.push_back({s.x, 1.0 - s.y[0], s.y[1]});
  };

  auto r = ode::integrate<2>(f, xi0, s0, xi_end, oo, obs, events);
  orbit.y_end = 1.0 - r.y[0];
  orbit.v_end = r.y[1];
  orbit.xi_exit = r.x;
  if (r.status == ode::Status::reached_end) {
    orbit.end = OrbitEnd::reached_xi_end;
  } else if (r.status == ode::Status::event_hit &&
             (r.event_index == idx_exit_y || r.event_index == idx_exit_v)) {
    orbit.end = OrbitEnd::exited_region;
  } else if (r.status == ode::Status::event_hit && r.event_index == idx_collapse) {
    orbit.end = OrbitEnd::shear_collapse;
  } else if (r.status == ode::Status::event_hit && r.event_index == idx_stall) {
    orbit.end = OrbitEnd::stalled;
  } else {
    orbit.end = OrbitEnd::solver_failure;
  }
  return orbit;
}

GammaTwoOrbit track_shear_gamma2(const Material& mat, double delta_c, double r_end,
                                 const SolveOptions& opts) {
  if (std::abs(mat.gamma - 2.0) > 1e-12)
    throw std::domain_error("track_shear_gamma2 requires gamma = 2");
  GammaTwoOrbit out;

  // State (u = 1 - y, eta): y' = (Upsilon(y)/r - theta r y^(1-beta)) y,
  // eta' = -3 eta u / r.
  auto f = [&mat](double r, const ode::State<2>& s, ode::State<2>& ds) {
    const double y = 1.0 - s[0];
    if (!(y > 0.0) || !(s[1] > 0.0)) {
      ds[0] = ds[1] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    ds[0] = -(upsilon(mat, y) / r - mat.theta * r * std::pow(y, 1.0 - mat.beta)) * y;
    ds[1] = -3.0 * s[1] * s[0] / r;
  };

  const double C = mat.theta;  // theta delta_c^(2-gamma) with gamma = 2
  const double r0 = 1e-4 / std::sqrt(C);
  ode::State<2> s0{C / 5.0 * r0 * r0, delta_c * (1.0 - 0.3 * mat.theta * r0 * r0)};

  std::vector<ode::Event<2>> events;
  events.push_back(
      {[](double, const ode::State<2>& s) { return (1.0 - s[0]) - 1e-10; }, -1});

  ode::Options oo;
  oo.rtol = opts.rtol;
  oo.atol = std::min(1e-16, 1e-9 * s0[0]);
  oo.max_steps = opts.max_steps;

  std::function<void(const ode::Sample<2>&)> obs = [&](const ode::Sample<2>& s) {
    const double y = 1.0 - s.y[0];
    const double eta = s.y[1];
    out.samples.push_back({s.x, y * eta, eta, y, 0.0, 0.0,
                           4.0 * M_PI / 3.0 * eta * s.x * s.x * s.x});
  };
  auto r = ode::integrate<2>(f, r0, s0, r_end, oo, obs, events);
  out.r_end = r.x;
  return out;
}

}  // namespace polyball
