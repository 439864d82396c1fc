#include "nlhj/levy_family.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace nlhj {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw Error("LevyFamily: dimension must be 1, 2 or 3");
}

}  // namespace

LevyFamily::LevyFamily(int dim, Spec spec) : dim_(dim), spec_(std::move(spec)) {
  check_dim(dim);
  if (auto* d = std::get_if<DensitySpec>(&spec_)) {
    if (!(d->ellipticity > 0)) throw Error("DensitySpec: ellipticity must be positive");
    if (!(d->order > 0 && d->order < 2)) throw Error("DensitySpec: order must lie in (0,2)");
    if (d->regularity < 0) throw Error("DensitySpec: regularity constant must be >= 0");
    if (!d->kernel) throw Error("DensitySpec: missing kernel");
  } else if (auto* v = std::get_if<VariableOrderSpec>(&spec_)) {
    if (!(0 < v->sigma_min && v->sigma_min <= v->sigma_max && v->sigma_max < 2))
      throw Error("VariableOrderSpec: need 0 < sigma_min <= sigma_max < 2");
    if (!v->order) throw Error("VariableOrderSpec: missing order function");
  } else if (auto* li = std::get_if<LevyItoSpec>(&spec_)) {
    if (!li->base) throw Error("LevyItoSpec: missing base measure");
    if (li->base->is_levy_ito()) throw Error("LevyItoSpec: base must not itself be LevyIto");
    if (li->base->dim() != dim) throw Error("LevyItoSpec: base dimension mismatch");
    if (!(0 < li->c0 && li->c0 <= li->c1)) throw Error("LevyItoSpec: need 0 < c0 <= c1");
    if (!li->jump) throw Error("LevyItoSpec: missing jump function");
  } else if (auto* rq = std::get_if<RotatedQuadrantSpec>(&spec_)) {
    if (dim != 2) throw Error("RotatedQuadrantSpec: dimension is fixed to 2");
    if (!(rq->order > 0 && rq->order < 2)) throw Error("RotatedQuadrantSpec: order must lie in (0,2)");
  } else if (auto* fa = std::get_if<FiniteAtomicSpec>(&spec_)) {
    for (const auto& a : fa->atoms) {
      if (a.location.size() != dim) throw Error("FiniteAtomicSpec: atom dimension mismatch");
      if (a.location.norm() == 0) throw Error("FiniteAtomicSpec: atom at the origin rejected");
      if (a.mass < 0) throw Error("FiniteAtomicSpec: negative mass");
    }
  }
}

bool LevyFamily::has_density() const { return !std::holds_alternative<FiniteAtomicSpec>(spec_); }
bool LevyFamily::is_levy_ito() const { return std::holds_alternative<LevyItoSpec>(spec_); }
bool LevyFamily::is_atomic() const { return std::holds_alternative<FiniteAtomicSpec>(spec_); }

const LevyItoSpec& LevyFamily::as_levy_ito() const {
  if (!is_levy_ito()) throw NotLevyIto("operation requires a LevyIto family");
  return std::get<LevyItoSpec>(spec_);
}

std::vector<PointMass> LevyFamily::atoms_at(const Vec& xi) const {
  const auto& fa = as_finite_atomic();
  if (fa.atoms_of) {
    auto atoms = fa.atoms_of(xi);
    for (const auto& a : atoms)
      if (a.location.norm() == 0) throw Error("FiniteAtomic: atom at the origin rejected");
    return atoms;
  }
  return fa.atoms;
}

Real LevyFamily::declared_order(const Vec& xi) const {
  if (auto* d = std::get_if<DensitySpec>(&spec_)) return d->order;
  if (auto* v = std::get_if<VariableOrderSpec>(&spec_)) {
    const Real s = v->order(xi);
    return std::min(std::max(s, v->sigma_min), v->sigma_max);
  }
  if (auto* rq = std::get_if<RotatedQuadrantSpec>(&spec_)) return rq->order;
  if (auto* li = std::get_if<LevyItoSpec>(&spec_)) return li->base->declared_order(zero_vec(dim_));
  throw NoDensity("FiniteAtomic family has no order");
}

LevyFamily LevyFamily::fractional(int dim, Real sigma, Real lambda) {
  DensitySpec d;
  d.kernel = [dim, sigma, lambda](const Vec&, const Vec& z) {
    return lambda * std::pow(z.norm(), -(dim + sigma));
  };
  d.ellipticity = lambda;
  d.order = sigma;
  d.regularity = 0;
  return LevyFamily(dim, std::move(d));
}

LevyFamily LevyFamily::weighted_fractional(int dim, Real sigma, Real lambda, Real a) {
  DensitySpec d;
  d.kernel = [dim, sigma, lambda, a](const Vec& xi, const Vec& z) {
    return lambda * (1.0 + a * std::sin(xi[0])) * std::pow(z.norm(), -(dim + sigma));
  };
  d.ellipticity = lambda * (1.0 + std::abs(a));
  d.order = sigma;
  d.regularity = lambda * std::abs(a);
  return LevyFamily(dim, std::move(d));
}

LevyFamily LevyFamily::variable_order(int dim, OrderFn order, Real s1, Real s2, Real c_sigma) {
  VariableOrderSpec v;
  v.order = std::move(order);
  v.sigma_min = s1;
  v.sigma_max = s2;
  v.lipschitz = c_sigma;
  return LevyFamily(dim, std::move(v));
}

LevyFamily LevyFamily::rotated_quadrant(Real sigma) {
  return LevyFamily(2, RotatedQuadrantSpec{sigma});
}

LevyFamily LevyFamily::finite_atomic(int dim, std::vector<PointMass> atoms) {
  FiniteAtomicSpec fa;
  fa.atoms = std::move(atoms);
  return LevyFamily(dim, std::move(fa));
}

LevyFamily LevyFamily::levy_ito(LevyFamily base, JumpFn jump, Real c0, Real c1) {
  LevyItoSpec li;
  li.base = std::make_shared<LevyFamily>(std::move(base));
  li.jump = std::move(jump);
  li.c0 = c0;
  li.c1 = c1;
  return LevyFamily(li.base->dim(), std::move(li));
}

void LevyFamily::validate_samples(const std::vector<Vec>& xi_samples,
                                  const std::vector<Vec>& z_samples) const {
  if (auto* d = std::get_if<DensitySpec>(&spec_)) {
    for (const auto& xi : xi_samples)
      for (const auto& z : z_samples) {
        if (z.norm() == 0) continue;
        const Real k = d->kernel(xi, z);
        const Real cap = d->ellipticity * std::pow(z.norm(), -(dim_ + d->order));
        if (k < 0 || k > cap * (1 + 1e-12))
          throw Error("Density invariant violated: K outside [0, Lambda |z|^{-(N+sigma)}]");
      }
  } else if (auto* v = std::get_if<VariableOrderSpec>(&spec_)) {
    for (const auto& xi : xi_samples) {
      const Real s = v->order(xi);
      if (s < v->sigma_min - 1e-12 || s > v->sigma_max + 1e-12)
        throw Error("VariableOrder invariant violated: sigma(xi) outside [sigma_min, sigma_max]");
    }
  } else if (auto* li = std::get_if<LevyItoSpec>(&spec_)) {
    for (const auto& xi : xi_samples)
      for (const auto& z : z_samples) {
        if (z.norm() == 0) continue;
        const Real jn = li->jump(xi, z).norm();
        if (jn < li->c0 * z.norm() * (1 - 1e-12) || jn > li->c1 * z.norm() * (1 + 1e-12))
          throw Error("LevyIto invariant violated: |j(xi,z)| outside [c0|z|, c1|z|]");
      }
  } else if (std::holds_alternative<FiniteAtomicSpec>(spec_)) {
    for (const auto& xi : xi_samples) atoms_at(xi);  // re-checks the origin exclusion
  }
}

Real base_angle(const Vec& xi) {
  if (xi.size() < 2) return 0;
  if (xi.norm() == 0) return 0;
  return std::atan2(xi[1], xi[0]);
}

Real quadrant_rotation(const Vec& xi) { return std::sqrt(std::abs(base_angle(xi))); }

namespace {

/// Inverts w -> j(xi, w) at z by damped Newton with finite-difference
/// Jacobian. Adequate for the smooth invertible jumps of (J1)-(J2).
Vec invert_jump(const LevyItoSpec& li, const Vec& xi, const Vec& z) {
  const int n = static_cast<int>(z.size());
  Vec w = z / (0.5 * (li.c0 + li.c1));
  const Real scale = z.norm();
  for (int iter = 0; iter < 80; ++iter) {
    const Vec r = li.jump(xi, w) - z;
    if (r.norm() <= 1e-13 * scale) return w;
    Eigen::MatrixXd J(n, n);
    const Real h = std::max<Real>(1e-7 * w.norm(), 1e-12);
    for (int c = 0; c < n; ++c) {
      Vec wp = w, wm = w;
      wp[c] += h;
      wm[c] -= h;
      J.col(c) = (li.jump(xi, wp) - li.jump(xi, wm)) / (2 * h);
    }
    const Eigen::VectorXd step = J.fullPivLu().solve(-r);
    Real damp = 1.0;
    Vec w_next = w + damp * Vec(step);
    // halve the step until the residual decreases
    for (int k = 0; k < 20 && (li.jump(xi, w_next) - z).norm() >= r.norm(); ++k) {
      damp *= 0.5;
      w_next = w + damp * Vec(step);
    }
    w = w_next;
  }
  throw Error("LevyIto density: jump inversion did not converge");
}

Real jump_jacobian_det(const LevyItoSpec& li, const Vec& xi, const Vec& w) {
  const int n = static_cast<int>(w.size());
  Eigen::MatrixXd J(n, n);
  const Real h = std::max<Real>(1e-6 * w.norm(), 1e-10);
  for (int c = 0; c < n; ++c) {
    Vec wp = w, wm = w;
    wp[c] += h;
    wm[c] -= h;
    J.col(c) = (li.jump(xi, wp) - li.jump(xi, wm)) / (2 * h);
  }
  return std::abs(J.determinant());
}

}  // namespace

Real density_at(const LevyFamily& family, const Vec& xi, const Vec& z) {
  if (z.norm() == 0) throw ZeroPoint("density_at: z = 0");
  const int n = family.dim();
  return std::visit(
      [&](const auto& spec) -> Real {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, DensitySpec>) {
          return spec.kernel(xi, z);
        } else if constexpr (std::is_same_v<T, VariableOrderSpec>) {
          return std::pow(z.norm(), -(n + spec.order(xi)));
        } else if constexpr (std::is_same_v<T, RotatedQuadrantSpec>) {
          const Real alpha = quadrant_rotation(xi);
          const Real c = std::cos(-alpha), s = std::sin(-alpha);
          const Real u = c * z[0] - s * z[1];
          const Real v = s * z[0] + c * z[1];
          if (u <= 0 || v <= 0) return 0;
          return std::pow(z.norm(), -(2 + spec.order));
        } else if constexpr (std::is_same_v<T, LevyItoSpec>) {
          const Vec w = invert_jump(spec, xi, z);
          const Real det = jump_jacobian_det(spec, xi, w);
          if (det == 0) throw Error("LevyIto density: singular jump Jacobian");
          return density_at(*spec.base, zero_vec(n), w) / det;
        } else {
          throw NoDensity("density_at: FiniteAtomic family has no density");
        }
      },
      family.spec());
}

}  // namespace nlhj
