#pragma once

#include "nlhj/core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace nlhj {

using KernelFn = std::function<Real(const Vec& xi, const Vec& z)>;
using OrderFn = std::function<Real(const Vec& xi)>;
using JumpFn = std::function<Vec(const Vec& xi, const Vec& z)>;

struct PointMass {
  Vec location;
  Real mass = 0;
};

/// Measure with a pointwise density kernel nu_xi(dz) = K(xi, z) dz,
/// degenerate elliptic of order `order`: 0 <= K <= ellipticity * |z|^{-(N+order)}.
struct DensitySpec {
  KernelFn kernel;
  Real ellipticity = 1;   // Lambda
  Real order = 1;         // sigma in (0, 2)
  Real regularity = 0;    // C_K, Lipschitz constant of K in xi against |z|^{-(N+sigma)}
};

/// Kernel |z|^{-(N + order(xi))} with order(xi) in [sigma_min, sigma_max].
struct VariableOrderSpec {
  OrderFn order;
  Real sigma_min = 0.5;
  Real sigma_max = 1.5;
  Real lipschitz = 0;     // C_sigma
};

class LevyFamily;

/// Push-forward of a fixed base measure through a jump function:
/// nu_xi = (j(xi, .))_# base, with c0 |z| <= |j(xi, z)| <= c1 |z|.
/// The base family is evaluated at xi = 0 and must not depend on xi.
struct LevyItoSpec {
  std::shared_ptr<const LevyFamily> base;
  JumpFn jump;
  Real c0 = 1;
  Real c1 = 1;
};

/// The quadrant example on R^2: nu_xi = (R_xi)_# [ 1_Q(z) |z|^{-(2+sigma)} dz ]
/// where Q is the open positive quadrant and R_xi rotates by sqrt(|theta_xi|),
/// theta_xi in (-pi, pi] the angle of xi.
struct RotatedQuadrantSpec {
  Real order = 1;  // sigma in (0, 2)
};

/// Finite sum of point masses; optionally xi-dependent through a callable.
/// Masses are arbitrary nonnegative reals, never normalized.
struct FiniteAtomicSpec {
  std::vector<PointMass> atoms;
  std::function<std::vector<PointMass>(const Vec& xi)> atoms_of;  // optional
};

class LevyFamily {
 public:
  using Spec = std::variant<DensitySpec, VariableOrderSpec, LevyItoSpec,
                            RotatedQuadrantSpec, FiniteAtomicSpec>;

  LevyFamily(int dim, Spec spec);

  int dim() const { return dim_; }
  const Spec& spec() const { return spec_; }

  bool has_density() const;
  bool is_levy_ito() const;
  bool is_atomic() const;

  const DensitySpec& as_density() const { return std::get<DensitySpec>(spec_); }
  const VariableOrderSpec& as_variable_order() const { return std::get<VariableOrderSpec>(spec_); }
  const LevyItoSpec& as_levy_ito() const;
  const RotatedQuadrantSpec& as_rotated_quadrant() const { return std::get<RotatedQuadrantSpec>(spec_); }
  const FiniteAtomicSpec& as_finite_atomic() const { return std::get<FiniteAtomicSpec>(spec_); }

  /// Atoms of a FiniteAtomic variant at base point xi.
  std::vector<PointMass> atoms_at(const Vec& xi) const;

  /// Power-law order used for analytic treatment of the inner singularity
  /// and the far tail. For LevyIto this is the base measure's order.
  Real declared_order(const Vec& xi) const;

  // --- factories for the common cases -------------------------------------

  /// K(xi, z) = lambda * |z|^{-(N+sigma)}, independent of xi.
  static LevyFamily fractional(int dim, Real sigma, Real lambda = 1);

  /// K(xi, z) = lambda * (1 + a*sin(xi_1)) * |z|^{-(N+sigma)};
  /// satisfies (K1) with Lambda = lambda*(1+a) and (K2) with C_K = lambda*a.
  static LevyFamily weighted_fractional(int dim, Real sigma, Real lambda = 1, Real a = 0.5);

  static LevyFamily variable_order(int dim, OrderFn order, Real s1, Real s2, Real c_sigma = 0);
  static LevyFamily rotated_quadrant(Real sigma);
  static LevyFamily finite_atomic(int dim, std::vector<PointMass> atoms);
  static LevyFamily levy_ito(LevyFamily base, JumpFn jump, Real c0, Real c1);

  /// Spot-checks the variant invariants on sampled (xi, z) pairs and throws
  /// Error on the first violation. Cheap; intended for config loading.
  void validate_samples(const std::vector<Vec>& xi_samples,
                        const std::vector<Vec>& z_samples) const;

 private:
  int dim_;
  Spec spec_;
};

/// Angle of xi in (-pi, pi]; 0 for xi = 0.
Real base_angle(const Vec& xi);

/// Rotation angle sqrt(|theta_xi|) of the quadrant family at xi.
Real quadrant_rotation(const Vec& xi);

/// Pointwise density K(xi, z). Throws ZeroPoint for z = 0 and NoDensity for
/// FiniteAtomic. LevyIto densities are recovered numerically by inverting the
/// jump function (Newton with finite-difference Jacobian).
Real density_at(const LevyFamily& family, const Vec& xi, const Vec& z);

}  // namespace nlhj
