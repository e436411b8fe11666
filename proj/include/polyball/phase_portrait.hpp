#ifndef POLYBALL_PHASE_PORTRAIT_HPP
#define POLYBALL_PHASE_PORTRAIT_HPP

#include <array>
#include <vector>

#include "polyball/material.hpp"
#include "polyball/static_ball.hpp"

namespace polyball {

/// Growth-rate function of the autonomous phase system,
/// Upsilon(y) = 3(1-y) + 3(beta-gamma) B(y) y^(-beta).
double upsilon(const Material& mat, double y);

/// Vector field of the autonomous system in xi = log r:
///   dy/dxi = [Upsilon(y) - v] y
///   dv/dxi = [(1-beta)(Upsilon(y) - v) + 2 - 3(2-gamma)(1-y)] v
std::array<double, 2> phase_vector_field(const Material& mat, double y, double v);

/// Analytic Jacobian of the vector field, rows d(dy),d(dv), columns (y, v).
std::array<std::array<double, 2>, 2> phase_jacobian(const Material& mat, double y,
                                                    double v);

enum class FixedPointClass { saddle, sink, source, center_like };

struct FixedPointRecord {
  char name;  // 'O', 'Q' or 'P'
  double y, v;
  // Eigenvalues as (re, im); im = 0 for a real pair.
  std::array<double, 2> eig_re{};
  std::array<double, 2> eig_im{};
  // Unit eigenvectors in (y, v) components, valid for real eigenvalues.
  std::array<std::array<double, 2>, 2> eigvec{};
  bool eigvec_valid = false;
  FixedPointClass cls = FixedPointClass::center_like;
  double field_residual = 0.0;  // |F| at the fixed point
  bool eigen_valid = true;      // false when the field is not C^1 there (Q, beta >= 1)
};

/// Fixed points O = (1,0), Q = (0,0) and, when y_P lies in (0,1),
/// P = (y_P, Upsilon(y_P)).  Unsupported for gamma = 2 (degenerate chart).
std::vector<FixedPointRecord> fixed_points(const Material& mat);

struct OrbitSample {
  double xi, y, v;
};

enum class OrbitEnd {
  reached_xi_end,
  exited_region,   // left U = {v > 0, y < 1}
  shear_collapse,  // y -> 0 (finite-xi blow-up side)
  stalled,
  solver_failure
};

struct PhaseOrbit {
  std::vector<OrbitSample> samples;
  OrbitEnd end = OrbitEnd::reached_xi_end;
  double xi_exit = 0.0;
  double y_end = 0.0, v_end = 0.0;
};

/// Track the unique orbit Gamma emanating from the saddle O into the interior,
/// seeded on the unstable manifold at amplitude C e^(2 xi0) = seed_amplitude
/// with C = theta delta_c^(2-gamma).  The default amplitude keeps the
/// quadratic manifold truncation below the downstream matching budget.
PhaseOrbit track_gamma(const Material& mat, double C, double xi_end,
                       const SolveOptions& opts = {},
                       double seed_amplitude = 1e-10);

/// gamma = 2: the (y,v) chart degenerates; the shear decouples as
///   y' = (Upsilon(y)/r - theta r y^(1-beta)) y,
/// and eta follows by quadrature.  Returns samples of (r, y, eta).
struct GammaTwoOrbit {
  std::vector<ProfileSample> samples;  // r, delta=y*eta, eta, y
  double r_end = 0.0;
};
GammaTwoOrbit track_shear_gamma2(const Material& mat, double delta_c, double r_end,
                                 const SolveOptions& opts = {});

}  // namespace polyball

#endif
