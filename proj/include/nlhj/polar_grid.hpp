#pragma once

#include "nlhj/measure_ops.hpp"

#include <cstdint>
#include <vector>

namespace nlhj {

/// Geometric radial shells times angular sectors covering the annulus
/// (r0, r_max]. The requested ratio is nudged so an integer number of
/// shells covers the annulus exactly with one constant ratio.
struct PolarGrid {
  int dim = 1;
  Real r0 = 1e-4;
  Real r_max = 32.0;
  Real ratio = 1.1892071150027210667;  // 2^{1/4}
  int shells = 0;
  int angular = 2;          ///< sectors per shell (1-D: the two half-lines)
  Real angular_offset = 0;  ///< rotation of the sector pattern, 2-D only

  static PolarGrid make(int dim, Real r0, Real r_max,
                        Real requested_ratio = 1.1892071150027210667,
                        int angular = 0, Real angular_offset = 0);
  static PolarGrid defaults(int dim) { return make(dim, 1e-4, 32.0); }

  Real edge(int k) const { return r0 * std::pow(ratio, k); }
  Real shell_center(int k) const { return std::sqrt(edge(k) * edge(k + 1)); }

  /// Identifies grids whose cells (and hence atom locations) coincide.
  std::uint64_t signature() const;
};

struct Atom {
  Vec z;
  Real mass = 0;
  int shell = -1;
  int sector = -1;
};

/// Common currency for transport and discrete total variation: point masses
/// on an annulus with the originating grid's signature (0 for raw atomic
/// measures that never lived on a grid).
struct DiscretizedMeasure {
  int dim = 1;
  std::vector<Atom> atoms;
  Real r_inner = 0;
  Real r_outer = 0;
  std::uint64_t grid_sig = 0;

  Real total_mass() const {
    Real m = 0;
    for (const auto& a : atoms) m += a.mass;
    return m;
  }

  /// Atoms inside the closed ball |z| <= r. Boundary atoms are kept, in line
  /// with the convention that open versus closed balls does not matter away
  /// from the origin.
  DiscretizedMeasure restricted(Real r) const;

  static DiscretizedMeasure from_atoms(int dim, std::vector<PointMass> pts);
};

struct DiscretizeOptions {
  bool validate = true;       ///< refine each cell once and compare
  Real cell_tolerance = 1e-6; ///< relative per-cell mass error triggering GridTooCoarse
};

/// Integrates the family's density cell by cell (exact placement for atomic
/// variants). Throws GridTooCoarse when the per-cell refinement check fails.
DiscretizedMeasure discretize(const LevyFamily& family, const Vec& xi,
                              const PolarGrid& grid, const DiscretizeOptions& opts = {});

/// Discretizes the base measure of a LevyIto family, then maps each atom
/// through z -> j(xi, z) keeping its mass. Throws JumpOutOfBounds if a
/// mapped atom violates c0 |z| <= |j(xi, z)| <= c1 |z|.
DiscretizedMeasure pushforward_discretize(const LevyFamily& family, const Vec& xi,
                                          const PolarGrid& grid,
                                          const DiscretizeOptions& opts = {});

/// The grid a family prefers at a given base point: the rotated-quadrant
/// family aligns the sector pattern with its own quadrant edges (cells then
/// never straddle the kernel's discontinuity); other families keep the base
/// grid unchanged.
PolarGrid preferred_grid(const LevyFamily& family, const Vec& xi, PolarGrid base);

}  // namespace nlhj
