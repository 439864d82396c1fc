#include "nlhj/polar_grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlhj {

PolarGrid PolarGrid::make(int dim, Real r0, Real r_max, Real requested_ratio,
                          int angular, Real angular_offset) {
  if (dim < 1 || dim > 3) throw Error("PolarGrid: dimension must be 1, 2 or 3");
  if (!(0 < r0 && r0 < r_max)) throw Error("PolarGrid: need 0 < r0 < r_max");
  if (!(requested_ratio > 1)) throw Error("PolarGrid: ratio must exceed 1");
  PolarGrid g;
  g.dim = dim;
  g.r0 = r0;
  g.r_max = r_max;
  const Real span = std::log(r_max / r0) / std::log(requested_ratio);
  g.shells = std::max(1, static_cast<int>(std::lround(span)));
  g.ratio = std::pow(r_max / r0, 1.0 / g.shells);
  if (angular <= 0) angular = dim == 1 ? 2 : (dim == 2 ? 32 : 64);
  g.angular = dim == 1 ? 2 : angular;
  g.angular_offset = dim == 2 ? angular_offset : 0;
  return g;
}

std::uint64_t PolarGrid::signature() const {
  std::ostringstream os;
  os.precision(17);
  os << dim << '|' << r0 << '|' << r_max << '|' << shells << '|' << angular << '|'
     << angular_offset;
  return fnv1a(os.str());
}

DiscretizedMeasure DiscretizedMeasure::restricted(Real r) const {
  DiscretizedMeasure out;
  out.dim = dim;
  out.r_inner = r_inner;
  out.r_outer = std::min(r_outer, r);
  out.grid_sig = grid_sig;
  for (const auto& a : atoms)
    if (a.z.norm() <= r) out.atoms.push_back(a);
  return out;
}

DiscretizedMeasure DiscretizedMeasure::from_atoms(int dim, std::vector<PointMass> pts) {
  DiscretizedMeasure out;
  out.dim = dim;
  out.grid_sig = 0;
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
  for (auto& p : pts) {
    const Real nz = p.location.norm();
    if (nz == 0) throw Error("DiscretizedMeasure: atom at the origin rejected");
    if (p.mass <= 0) continue;
    lo = std::min(lo, nz);
    hi = std::max(hi, nz);
    out.atoms.push_back({p.location, p.mass, -1, -1});
  }
  out.r_inner = out.atoms.empty() ? 0 : lo * 0.5;
  out.r_outer = hi;
  return out;
}

namespace {

/// 4-point Gauss-Legendre, used for the angular integral within a sector.
constexpr Real kGL4x[4] = {-0.8611363115940526, -0.3399810435848563,
                           0.3399810435848563, 0.8611363115940526};
constexpr Real kGL4w[4] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

Vec unit2(Real th) { return make_vec({std::cos(th), std::sin(th)}); }

/// Integrated density over one cell of the grid. `refine` doubles the
/// radial (and 2-D angular) resolution for the coarseness check.
Real cell_mass(const LevyFamily& family, const Vec& xi, const PolarGrid& grid,
               int shell, int sector, bool refine) {
  const int n = family.dim();
  const Real a = grid.edge(shell);
  const Real b = grid.edge(shell + 1);
  const int rad_pieces = refine ? 2 : 1;

  if (auto* rq = std::get_if<RotatedQuadrantSpec>(&family.spec())) {
    // radial power law times the exact angular overlap with the quadrant
    const Real sigma = rq->order;
    const Real radial = (std::pow(a, -sigma) - std::pow(b, -sigma)) / sigma;
    const Real width = 2.0 * M_PI / grid.angular;
    const Real lo = grid.angular_offset + sector * width;
    const Real overlap = arc_overlap(lo, width, quadrant_rotation(xi), M_PI / 2);
    return radial * overlap;
  }

  auto radial_int = [&](auto&& f) {
    Real acc = 0;
    for (int p = 0; p < rad_pieces; ++p) {
      const Real lo = a + (b - a) * p / rad_pieces;
      const Real hi = a + (b - a) * (p + 1) / rad_pieces;
      acc += gauss8(f, lo, hi);
    }
    return acc;
  };

  if (n == 1) {
    const Real sgn = sector == 0 ? 1.0 : -1.0;
    return radial_int([&](Real rho) {
      return density_at(family, xi, make_vec({sgn * rho}));
    });
  }
  if (n == 2) {
    const Real width = 2.0 * M_PI / grid.angular;
    const Real t0 = grid.angular_offset + sector * width;
    const int ang_pieces = refine ? 2 : 1;
    return radial_int([&](Real rho) {
      Real s = 0;
      for (int p = 0; p < ang_pieces; ++p) {
        const Real lo = t0 + width * p / ang_pieces;
        const Real half = 0.5 * width / ang_pieces;
        const Real mid = lo + half;
        for (int i = 0; i < 4; ++i)
          s += kGL4w[i] * half * density_at(family, xi, Vec(rho * unit2(mid + half * kGL4x[i])));
      }
      return s * rho;
    });
  }
  // n == 3: one Fibonacci direction per sector carrying solid angle 4*pi/angular
  const SphereRule rule = SphereRule::make(3, grid.angular);
  const Vec dir = rule.dirs[sector];
  return rule.weights[sector] * radial_int([&](Real rho) {
    return density_at(family, xi, Vec(rho * dir)) * rho * rho;
  });
}

}  // namespace

DiscretizedMeasure discretize(const LevyFamily& family, const Vec& xi,
                              const PolarGrid& grid, const DiscretizeOptions& opts) {
  if (family.dim() != grid.dim) throw Error("discretize: dimension mismatch");

  DiscretizedMeasure out;
  out.dim = grid.dim;
  out.r_inner = grid.r0;
  out.r_outer = grid.r_max;
  out.grid_sig = grid.signature();

  if (family.is_atomic()) {
    for (const auto& p : family.atoms_at(xi)) {
      const Real nz = p.location.norm();
      if (p.mass > 0 && nz > grid.r0 && nz <= grid.r_max)
        out.atoms.push_back({p.location, p.mass, -1, -1});
    }
    return out;
  }

  if (family.is_levy_ito()) return pushforward_discretize(family, xi, grid, opts);

  const int n = grid.dim;
  const int sectors = n == 1 ? 2 : grid.angular;
  const Real width = 2.0 * M_PI / grid.angular;
  const SphereRule fib = n == 3 ? SphereRule::make(3, grid.angular) : SphereRule{};
  const Real total_scale = annulus_mass(family, xi, grid.r0, grid.r_max);

  for (int k = 0; k < grid.shells; ++k) {
    const Real rc = grid.shell_center(k);
    for (int s = 0; s < sectors; ++s) {
      const Real m = cell_mass(family, xi, grid, k, s, false);
      if (opts.validate) {
        const Real m_ref = cell_mass(family, xi, grid, k, s, true);
        const Real denom = std::max(std::abs(m_ref), 1e-12 * total_scale);
        if (std::abs(m - m_ref) > opts.cell_tolerance * denom)
          throw GridTooCoarse("discretize: cell (" + std::to_string(k) + "," +
                              std::to_string(s) + ") mass error " +
                              std::to_string(std::abs(m - m_ref) / denom) +
                              " exceeds tolerance");
      }
      if (m <= 0) continue;
      Vec z;
      if (n == 1)
        z = make_vec({s == 0 ? rc : -rc});
      else if (n == 2)
        z = Vec(rc * unit2(grid.angular_offset + (s + 0.5) * width));
      else
        z = Vec(rc * fib.dirs[s]);
      out.atoms.push_back({z, m, k, s});
    }
  }
  return out;
}

DiscretizedMeasure pushforward_discretize(const LevyFamily& family, const Vec& xi,
                                          const PolarGrid& grid,
                                          const DiscretizeOptions& opts) {
  const auto& li = family.as_levy_ito();
  DiscretizedMeasure base = discretize(*li.base, zero_vec(family.dim()), grid, opts);

  DiscretizedMeasure out;
  out.dim = base.dim;
  out.grid_sig = 0;  // image atoms are not cell-aligned
  out.r_inner = grid.r0 * li.c0;
  out.r_outer = grid.r_max * li.c1;
  out.atoms.reserve(base.atoms.size());
  for (const auto& a : base.atoms) {
    const Vec j = li.jump(xi, a.z);
    const Real nz = a.z.norm(), nj = j.norm();
    if (nj < li.c0 * nz * (1 - 1e-12) || nj > li.c1 * nz * (1 + 1e-12))
      throw JumpOutOfBounds("pushforward_discretize: |j(xi,z)| outside [c0|z|, c1|z|]");
    out.atoms.push_back({j, a.mass, a.shell, a.sector});
  }
  return out;
}

PolarGrid preferred_grid(const LevyFamily& family, const Vec& xi, PolarGrid base) {
  if (std::holds_alternative<RotatedQuadrantSpec>(family.spec())) {
    base.angular_offset = quadrant_rotation(xi);
  } else if (family.is_levy_ito()) {
    return preferred_grid(*family.as_levy_ito().base, xi, base);
  }
  return base;
}

}  // namespace nlhj
