#pragma once

#include "nlhj/levy_family.hpp"
#include "nlhj/quadrature.hpp"

namespace nlhj {

/// Knobs for the shell quadrature shared by measure moments, discretization
/// and operator evaluation. Defaults resolve orders up to sigma ~ 1.9 at
/// desk scale.
struct QuadratureConfig {
  Real inner_cutoff = 1e-4;                   ///< r0 below which power-law extrapolation is used
  Real outer_cutoff = 32.0;                   ///< R_max of measure grids; tails beyond are analytic
  Real shell_ratio = 1.1892071150027210667;   ///< 2^{1/4} between shell edges
  int angular_1d = 2;
  int angular_2d = 32;
  int angular_3d = 64;
  Real tolerance = 1e-9;

  int angular(int dim) const {
    return dim == 1 ? angular_1d : (dim == 2 ? angular_2d : angular_3d);
  }
};

/// Direction rule adapted to the family: the rotated-quadrant family gets
/// midpoint directions inside its own quadrant (the kernel is smooth there,
/// so the indicator never gets sampled across its jump); everything else
/// gets the standard full-sphere rule.
SphereRule sphere_rule_for(const LevyFamily& family, const Vec& xi,
                           const QuadratureConfig& cfg);

/// Verifies that the density decays slower than |z|^{-(N+2)} at the inner
/// anchor, i.e. that second-moment integrals converge. Throws
/// QuadratureDivergence otherwise.
void check_inner_integrability(const LevyFamily& family, const Vec& xi,
                               const SphereRule& rule, Real anchor);

/// Analytic inner piece: per-direction integral over (0, anchor] of
/// rho^q K(xi, rho theta) rho^{N-1} drho under the power-law extrapolation
/// K(xi, rho theta) ~ K(xi, anchor theta) (rho/anchor)^{-(N+sigma)}.
/// Exact when the kernel is an exact power law near the origin.
Real inner_powerlaw_piece(const LevyFamily& family, const Vec& xi,
                          const Vec& dir, Real anchor, Real q);

/// Analytic far tail: per-direction integral over [anchor, infinity) of
/// K(xi, rho theta) rho^{N-1} drho under the same extrapolation.
Real tail_powerlaw_piece(const LevyFamily& family, const Vec& xi,
                         const Vec& dir, Real anchor);

// ---------------------------------------------------------------------------
// Truncated moments (the min(1,|z|^2) pieces of (M1), (M2) and friends).
// ---------------------------------------------------------------------------

/// int_{B_r} |z|^2 nu_xi(dz).
Real moment2_ball(const LevyFamily& family, const Vec& xi, Real r,
                  const QuadratureConfig& cfg = {});

/// int_{|z| > R} nu_xi(dz); power-law tails beyond the quadrature horizon
/// are completed analytically.
Real tail_mass(const LevyFamily& family, const Vec& xi, Real R,
               const QuadratureConfig& cfg = {});

/// int_{r < |z| <= R} nu_xi(dz), 0 < r < R.
Real annulus_mass(const LevyFamily& family, const Vec& xi, Real r, Real R,
                  const QuadratureConfig& cfg = {});

/// int_{r < |z| <= R} z nu_xi(dz); the compensator drift of the crown.
Vec first_moment_annulus(const LevyFamily& family, const Vec& xi, Real r, Real R,
                         const QuadratureConfig& cfg = {});

/// Per-axis second moments int_{B_r} z_d^2 nu_xi(dz), d = 0..N-1.
Vec moment2_axes_ball(const LevyFamily& family, const Vec& xi, Real r,
                      const QuadratureConfig& cfg = {});

/// Off-diagonal second moment int_{B_r} z_a z_b nu_xi(dz) (a != b); the
/// monotone solver requires it to be negligible.
Real moment2_cross_ball(const LevyFamily& family, const Vec& xi, int a, int b,
                        Real r, const QuadratureConfig& cfg = {});

}  // namespace nlhj
