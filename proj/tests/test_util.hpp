#pragma once

// Shared generators for the unit and acceptance suites.

#include "nlhj/polar_grid.hpp"

#include <random>

namespace testutil {

using namespace nlhj;

/// Seeded pair of atomic measures on a shared location pool inside B_1.
/// Either side may be missing mass at a location (zero masses are dropped),
/// so the pair exercises the full Jordan decomposition.
inline std::pair<DiscretizedMeasure, DiscretizedMeasure> random_atomic_pair(
    std::mt19937_64& rng, int dim, int max_atoms_per_side) {
  std::uniform_int_distribution<int> count(2, max_atoms_per_side);
  std::uniform_real_distribution<Real> radius(0.05, 0.999);
  std::uniform_real_distribution<Real> mass(0.0, 3.0);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  std::normal_distribution<Real> gauss(0.0, 1.0);

  const int n_loc = count(rng);
  std::vector<PointMass> side1, side2;
  for (int k = 0; k < n_loc; ++k) {
    Vec dir = zero_vec(dim);
    do {
      for (int d = 0; d < dim; ++d) dir[d] = gauss(rng);
    } while (dir.norm() < 1e-12);
    dir /= dir.norm();
    const Vec z = radius(rng) * dir;
    const Real m1 = unit(rng) < 0.3 ? 0.0 : mass(rng);
    const Real m2 = unit(rng) < 0.3 ? 0.0 : mass(rng);
    if (m1 > 0) side1.push_back({z, m1});
    if (m2 > 0) side2.push_back({z, m2});
  }
  return {DiscretizedMeasure::from_atoms(dim, side1),
          DiscretizedMeasure::from_atoms(dim, side2)};
}

}  // namespace testutil
