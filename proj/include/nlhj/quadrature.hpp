#pragma once

#include "nlhj/core.hpp"

#include <cmath>

namespace nlhj {

/// 8-point Gauss-Legendre rule on [-1, 1]; exact through degree 15.
/// Plenty for smooth power-law integrands on geometric shells.
struct GaussLegendre8 {
  static constexpr int n = 8;
  static constexpr Real x[8] = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
      -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
      0.7966664774136267,  0.9602898564975363};
  static constexpr Real w[8] = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
      0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
};

/// Integrates f on [a, b] with a single 8-point rule.
template <typename F>
Real gauss8(F&& f, Real a, Real b) {
  const Real mid = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  Real acc = 0;
  for (int i = 0; i < GaussLegendre8::n; ++i)
    acc += GaussLegendre8::w[i] * f(mid + half * GaussLegendre8::x[i]);
  return acc * half;
}

/// Integrates f over [a, b] split into geometric pieces with the given ratio.
/// Used for radial integrals of kernels that vary like a power of the radius.
template <typename F>
Real gauss8_geometric(F&& f, Real a, Real b, Real ratio = 1.1892071150027210667) {
  if (!(b > a)) return 0;
  Real acc = 0;
  Real lo = a;
  while (lo < b) {
    const Real hi = std::min(b, lo * ratio);
    acc += gauss8(f, lo, hi);
    if (hi >= b) break;
    lo = hi;
  }
  return acc;
}

/// Directions and weights approximating integration over the unit sphere
/// S^{N-1}: sum_i w_i f(theta_i) ~ int_{S^{N-1}} f dS.
///   N = 1: the two points {+1, -1}, weight 1 each (vol(dB) = 2).
///   N = 2: n equally spaced angles, weight 2*pi/n, optional angular offset.
///   N = 3: Fibonacci sphere, weight 4*pi/n. Exact for isotropic integrands;
///          midpoint-quality otherwise.
struct SphereRule {
  std::vector<Vec> dirs;
  std::vector<Real> weights;

  static SphereRule make(int dim, int n, Real angular_offset = 0) {
    SphereRule rule;
    if (dim == 1) {
      rule.dirs = {make_vec({1.0}), make_vec({-1.0})};
      rule.weights = {1.0, 1.0};
    } else if (dim == 2) {
      rule.dirs.reserve(n);
      rule.weights.assign(n, 2.0 * M_PI / n);
      for (int i = 0; i < n; ++i) {
        const Real th = angular_offset + (i + 0.5) * 2.0 * M_PI / n;
        rule.dirs.push_back(make_vec({std::cos(th), std::sin(th)}));
      }
    } else if (dim == 3) {
      rule.dirs.reserve(n);
      rule.weights.assign(n, 4.0 * M_PI / n);
      const Real golden = M_PI * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < n; ++i) {
        const Real zc = 1.0 - (2.0 * i + 1.0) / n;
        const Real rho = std::sqrt(std::max<Real>(0, 1.0 - zc * zc));
        const Real th = golden * i;
        rule.dirs.push_back(make_vec({rho * std::cos(th), rho * std::sin(th), zc}));
      }
    } else {
      throw Error("SphereRule: dimension must be 1, 2 or 3");
    }
    return rule;
  }

  int size() const { return static_cast<int>(dirs.size()); }
};

/// vol(S^{N-1}): 2, 2*pi, 4*pi for N = 1, 2, 3.
inline Real sphere_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw Error("sphere_volume: dimension must be 1, 2 or 3");
  }
}

/// Length of the overlap of the circular arcs [a, a+la) and [b, b+lb)
/// on the circle of circumference 2*pi. Arc lengths must be <= 2*pi.
inline Real arc_overlap(Real a, Real la, Real b, Real lb) {
  const Real two_pi = 2.0 * M_PI;
  auto wrap = [two_pi](Real t) {
    t = std::fmod(t, two_pi);
    return t < 0 ? t + two_pi : t;
  };
  // Shift so arc A starts at 0, then arc B may wrap once across 0.
  const Real b0 = wrap(b - a);
  Real overlap = 0;
  for (int k = -1; k <= 0; ++k) {
    const Real lo = std::max<Real>(0.0, b0 + k * two_pi);
    const Real hi = std::min(la, b0 + k * two_pi + lb);
    if (hi > lo) overlap += hi - lo;
  }
  return overlap;
}

}  // namespace nlhj
