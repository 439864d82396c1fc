#include "nlhj/measure_ops.hpp"

#include <cmath>

namespace nlhj {

namespace {

/// Bisects for the radius rho* with |j(xi, rho* theta)| = target along a ray.
/// (J2) guarantees a sign change on [target/(4 c1), 4 target/c0].
Real jump_radius(const LevyItoSpec& li, const Vec& xi, const Vec& dir, Real target) {
  Real lo = 0.25 * target / li.c1;
  Real hi = 4.0 * target / li.c0;
  auto val = [&](Real rho) { return li.jump(xi, Vec(rho * dir)).norm() - target; };
  Real flo = val(lo);
  if (flo >= 0) return lo;  // defensive; cannot happen under (J2)
  for (int it = 0; it < 200; ++it) {
    const Real mid = 0.5 * (lo + hi);
    if (val(mid) < 0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * target) break;
  }
  return 0.5 * (lo + hi);
}

struct AtomicSums {
  template <typename W>
  static Real sum(const LevyFamily& fam, const Vec& xi, W&& weight) {
    Real acc = 0;
    for (const auto& a : fam.atoms_at(xi)) acc += a.mass * weight(a.location);
    return acc;
  }
};

}  // namespace

SphereRule sphere_rule_for(const LevyFamily& family, const Vec& xi,
                           const QuadratureConfig& cfg) {
  const int n = family.dim();
  if (auto* rq = std::get_if<RotatedQuadrantSpec>(&family.spec())) {
    (void)rq;
    // Midpoints strictly inside the rotated quadrant; the kernel restricted
    // to these rays is the smooth power law rho^{-(2+sigma)}.
    const int m = std::max(4, cfg.angular(2) / 4);
    const Real alpha = quadrant_rotation(xi);
    SphereRule rule;
    rule.weights.assign(m, (M_PI / 2) / m);
    for (int i = 0; i < m; ++i) {
      const Real th = alpha + (i + 0.5) * (M_PI / 2) / m;
      rule.dirs.push_back(make_vec({std::cos(th), std::sin(th)}));
    }
    return rule;
  }
  return SphereRule::make(n, cfg.angular(n));
}

void check_inner_integrability(const LevyFamily& family, const Vec& xi,
                               const SphereRule& rule, Real anchor) {
  const int n = family.dim();
  for (const auto& dir : rule.dirs) {
    const Real k1 = density_at(family, xi, Vec(anchor * dir));
    const Real k2 = density_at(family, xi, Vec(0.5 * anchor * dir));
    if (k1 <= 0 || k2 <= 0) continue;
    const Real sigma_eff = std::log2(k2 / k1) - n;
    if (sigma_eff >= 2.0 - 1e-6)
      throw QuadratureDivergence(
          "inner singularity of order >= 2 detected (effective sigma = " +
          std::to_string(sigma_eff) + ")");
  }
}

Real inner_powerlaw_piece(const LevyFamily& family, const Vec& xi,
                          const Vec& dir, Real anchor, Real q) {
  const int n = family.dim();
  const Real sigma = family.declared_order(xi);
  if (q - sigma <= 1e-9)
    throw QuadratureDivergence("inner power-law piece diverges: q <= sigma");
  const Real k = density_at(family, xi, Vec(anchor * dir));
  return k * std::pow(anchor, static_cast<Real>(n) + q) / (q - sigma);
}

Real tail_powerlaw_piece(const LevyFamily& family, const Vec& xi,
                         const Vec& dir, Real anchor) {
  const int n = family.dim();
  const Real sigma = family.declared_order(xi);
  const Real k = density_at(family, xi, Vec(anchor * dir));
  return k * std::pow(anchor, static_cast<Real>(n)) / sigma;
}

namespace {

/// Shell-quadrature core shared by the moment operations on density-type
/// variants: sum_i w_i hfac(theta_i) int_a^b rho^{N-1+q} K(xi, rho theta_i) drho.
template <typename HFac>
Real radial_sum(const LevyFamily& family, const Vec& xi, const SphereRule& rule,
                Real a, Real b, Real q, const QuadratureConfig& cfg, HFac&& hfac) {
  if (!(b > a)) return 0;
  const int n = family.dim();
  return gauss8_geometric(
      [&](Real rho) {
        Real s = 0;
        for (int i = 0; i < rule.size(); ++i) {
          const Real h = hfac(rule.dirs[i]);
          if (h == 0) continue;
          s += rule.weights[i] * h * density_at(family, xi, Vec(rho * rule.dirs[i]));
        }
        return s * std::pow(rho, n - 1 + q);
      },
      a, b, cfg.shell_ratio);
}

template <typename HFac>
Real inner_sum(const LevyFamily& family, const Vec& xi, const SphereRule& rule,
               Real anchor, Real q, HFac&& hfac) {
  Real s = 0;
  for (int i = 0; i < rule.size(); ++i) {
    const Real h = hfac(rule.dirs[i]);
    if (h == 0) continue;
    s += rule.weights[i] * h * inner_powerlaw_piece(family, xi, rule.dirs[i], anchor, q);
  }
  return s;
}

template <typename HFac>
Real tail_sum(const LevyFamily& family, const Vec& xi, const SphereRule& rule,
              Real anchor, HFac&& hfac) {
  Real s = 0;
  for (int i = 0; i < rule.size(); ++i) {
    const Real h = hfac(rule.dirs[i]);
    if (h == 0) continue;
    s += rule.weights[i] * h * tail_powerlaw_piece(family, xi, rule.dirs[i], anchor);
  }
  return s;
}

constexpr auto kUnit = [](const Vec&) -> Real { return 1.0; };

}  // namespace

Real moment2_ball(const LevyFamily& family, const Vec& xi, Real r,
                  const QuadratureConfig& cfg) {
  if (!(r > 0)) throw Error("moment2_ball: r must be positive");
  if (family.is_atomic())
    return AtomicSums::sum(family, xi, [&](const Vec& z) {
      return z.norm() <= r ? z.squaredNorm() : 0.0;
    });
  if (family.is_levy_ito()) {
    const auto& li = family.as_levy_ito();
    const LevyFamily& base = *li.base;
    const Vec xi0 = zero_vec(family.dim());
    if (base.is_atomic())
      return AtomicSums::sum(base, xi0, [&](const Vec& z) {
        const Real jn = li.jump(xi, z).norm();
        return jn <= r ? jn * jn : 0.0;
      });
    const SphereRule rule = sphere_rule_for(base, xi0, cfg);
    check_inner_integrability(base, xi0, rule, std::min(cfg.inner_cutoff, r));
    Real acc = 0;
    for (int i = 0; i < rule.size(); ++i) {
      const Vec& dir = rule.dirs[i];
      const Real rho_star = jump_radius(li, xi, dir, r);
      const Real a = std::min(cfg.inner_cutoff, rho_star);
      // inner extrapolation |j(rho theta)| ~ |j(a theta)| rho / a
      const Real ja = li.jump(xi, Vec(a * dir)).norm();
      acc += rule.weights[i] * (ja / a) * (ja / a) *
             inner_powerlaw_piece(base, xi0, dir, a, 2.0);
      acc += rule.weights[i] *
             gauss8_geometric(
                 [&](Real rho) {
                   const Vec z = rho * dir;
                   const Real jn = li.jump(xi, z).norm();
                   return jn * jn * density_at(base, xi0, z) *
                          std::pow(rho, base.dim() - 1);
                 },
                 a, rho_star, cfg.shell_ratio);
    }
    return acc;
  }
  const SphereRule rule = sphere_rule_for(family, xi, cfg);
  const Real a = std::min(cfg.inner_cutoff, r);
  check_inner_integrability(family, xi, rule, a);
  return inner_sum(family, xi, rule, a, 2.0, kUnit) +
         radial_sum(family, xi, rule, a, r, 2.0, cfg, kUnit);
}

Real tail_mass(const LevyFamily& family, const Vec& xi, Real R,
               const QuadratureConfig& cfg) {
  if (!(R > 0)) throw Error("tail_mass: R must be positive");
  if (family.is_atomic())
    return AtomicSums::sum(family, xi,
                           [&](const Vec& z) { return z.norm() > R ? 1.0 : 0.0; });
  if (family.is_levy_ito()) {
    const auto& li = family.as_levy_ito();
    const LevyFamily& base = *li.base;
    const Vec xi0 = zero_vec(family.dim());
    if (base.is_atomic())
      return AtomicSums::sum(base, xi0, [&](const Vec& z) {
        return li.jump(xi, z).norm() > R ? 1.0 : 0.0;
      });
    const SphereRule rule = sphere_rule_for(base, xi0, cfg);
    Real acc = 0;
    for (int i = 0; i < rule.size(); ++i) {
      const Vec& dir = rule.dirs[i];
      // |j| crosses R exactly once along the ray (monotone under (J2));
      // integrating from rho_star avoids quadrature across the indicator jump.
      const Real rho_star = jump_radius(li, xi, dir, R);
      const Real far = std::max(cfg.outer_cutoff, 2.0 * rho_star);
      acc += rule.weights[i] *
             gauss8_geometric(
                 [&](Real rho) {
                   const Vec z = rho * dir;
                   return density_at(base, xi0, z) * std::pow(rho, base.dim() - 1);
                 },
                 rho_star, far, cfg.shell_ratio);
      acc += rule.weights[i] * tail_powerlaw_piece(base, xi0, dir, far);
    }
    return acc;
  }
  const SphereRule rule = sphere_rule_for(family, xi, cfg);
  const Real far = std::max(cfg.outer_cutoff, R);
  return radial_sum(family, xi, rule, R, far, 0.0, cfg, kUnit) +
         tail_sum(family, xi, rule, far, kUnit);
}

Real annulus_mass(const LevyFamily& family, const Vec& xi, Real r, Real R,
                  const QuadratureConfig& cfg) {
  if (!(0 < r && r < R)) throw Error("annulus_mass: need 0 < r < R");
  if (family.is_atomic())
    return AtomicSums::sum(family, xi, [&](const Vec& z) {
      const Real nz = z.norm();
      return (nz > r && nz <= R) ? 1.0 : 0.0;
    });
  if (family.is_levy_ito())
    return tail_mass(family, xi, r, cfg) - tail_mass(family, xi, R, cfg);
  const SphereRule rule = sphere_rule_for(family, xi, cfg);
  return radial_sum(family, xi, rule, r, R, 0.0, cfg, kUnit);
}

Vec first_moment_annulus(const LevyFamily& family, const Vec& xi, Real r, Real R,
                         const QuadratureConfig& cfg) {
  if (!(0 < r && r < R)) throw Error("first_moment_annulus: need 0 < r < R");
  const int n = family.dim();
  Vec out = zero_vec(n);
  if (family.is_atomic()) {
    for (const auto& a : family.atoms_at(xi)) {
      const Real nz = a.location.norm();
      if (nz > r && nz <= R) out += a.mass * a.location;
    }
    return out;
  }
  if (family.is_levy_ito()) {
    const auto& li = family.as_levy_ito();
    const LevyFamily& base = *li.base;
    const Vec xi0 = zero_vec(n);
    if (base.is_atomic()) {
      for (const auto& a : base.atoms_at(xi0)) {
        const Vec j = li.jump(xi, a.location);
        const Real jn = j.norm();
        if (jn > r && jn <= R) out += a.mass * j;
      }
      return out;
    }
    const SphereRule rule = sphere_rule_for(base, xi0, cfg);
    for (int i = 0; i < rule.size(); ++i) {
      const Vec& dir = rule.dirs[i];
      const Real lo = jump_radius(li, xi, dir, r);
      const Real hi = jump_radius(li, xi, dir, R);
      for (int d = 0; d < n; ++d)
        out[d] += rule.weights[i] *
                  gauss8_geometric(
                      [&](Real rho) {
                        const Vec z = rho * dir;
                        return li.jump(xi, z)[d] * density_at(base, xi0, z) *
                               std::pow(rho, n - 1);
                      },
                      lo, hi, cfg.shell_ratio);
    }
    return out;
  }
  const SphereRule rule = sphere_rule_for(family, xi, cfg);
  for (int d = 0; d < n; ++d)
    out[d] = radial_sum(family, xi, rule, r, R, 1.0, cfg,
                        [d](const Vec& th) { return th[d]; });
  return out;
}

Vec moment2_axes_ball(const LevyFamily& family, const Vec& xi, Real r,
                      const QuadratureConfig& cfg) {
  const int n = family.dim();
  Vec out = zero_vec(n);
  if (family.is_atomic()) {
    for (const auto& a : family.atoms_at(xi))
      if (a.location.norm() <= r)
        for (int d = 0; d < n; ++d) out[d] += a.mass * a.location[d] * a.location[d];
    return out;
  }
  if (family.is_levy_ito()) {
    const auto& li = family.as_levy_ito();
    const LevyFamily& base = *li.base;
    const Vec xi0 = zero_vec(n);
    const SphereRule rule = sphere_rule_for(base, xi0, cfg);
    for (int i = 0; i < rule.size(); ++i) {
      const Vec& dir = rule.dirs[i];
      const Real rho_star = jump_radius(li, xi, dir, r);
      const Real a = std::min(cfg.inner_cutoff, rho_star);
      const Vec ja = li.jump(xi, Vec(a * dir));
      for (int d = 0; d < n; ++d) {
        out[d] += rule.weights[i] * (ja[d] / a) * (ja[d] / a) *
                  inner_powerlaw_piece(base, xi0, dir, a, 2.0);
        out[d] += rule.weights[i] *
                  gauss8_geometric(
                      [&](Real rho) {
                        const Vec z = rho * dir;
                        const Real jd = li.jump(xi, z)[d];
                        return jd * jd * density_at(base, xi0, z) *
                               std::pow(rho, n - 1);
                      },
                      a, rho_star, cfg.shell_ratio);
      }
    }
    return out;
  }
  const SphereRule rule = sphere_rule_for(family, xi, cfg);
  const Real a = std::min(cfg.inner_cutoff, r);
  check_inner_integrability(family, xi, rule, a);
  for (int d = 0; d < n; ++d) {
    auto hfac = [d](const Vec& th) { return th[d] * th[d]; };
    out[d] = inner_sum(family, xi, rule, a, 2.0, hfac) +
             radial_sum(family, xi, rule, a, r, 2.0, cfg, hfac);
  }
  return out;
}

Real moment2_cross_ball(const LevyFamily& family, const Vec& xi, int a, int b,
                        Real r, const QuadratureConfig& cfg) {
  const int n = family.dim();
  if (a == b || a >= n || b >= n) throw Error("moment2_cross_ball: bad axes");
  if (family.is_atomic()) {
    Real acc = 0;
    for (const auto& at : family.atoms_at(xi))
      if (at.location.norm() <= r) acc += at.mass * at.location[a] * at.location[b];
    return acc;
  }
  if (family.is_levy_ito()) {
    const auto& li = family.as_levy_ito();
    const LevyFamily& base = *li.base;
    const Vec xi0 = zero_vec(n);
    const SphereRule rule = sphere_rule_for(base, xi0, cfg);
    Real acc = 0;
    for (int i = 0; i < rule.size(); ++i) {
      const Vec& dir = rule.dirs[i];
      const Real rho_star = jump_radius(li, xi, dir, r);
      const Real lo = std::min(cfg.inner_cutoff, rho_star);
      const Vec jl = li.jump(xi, Vec(lo * dir));
      acc += rule.weights[i] * (jl[a] / lo) * (jl[b] / lo) *
             inner_powerlaw_piece(base, xi0, dir, lo, 2.0);
      acc += rule.weights[i] *
             gauss8_geometric(
                 [&](Real rho) {
                   const Vec z = rho * dir;
                   const Vec j = li.jump(xi, z);
                   return j[a] * j[b] * density_at(base, xi0, z) * std::pow(rho, n - 1);
                 },
                 lo, rho_star, cfg.shell_ratio);
    }
    return acc;
  }
  const SphereRule rule = sphere_rule_for(family, xi, cfg);
  const Real lo = std::min(cfg.inner_cutoff, r);
  auto hfac = [a, b](const Vec& th) { return th[a] * th[b]; };
  return inner_sum(family, xi, rule, lo, 2.0, hfac) +
         radial_sum(family, xi, rule, lo, r, 2.0, cfg, hfac);
}

}  // namespace nlhj
