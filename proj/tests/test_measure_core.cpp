#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlhj/measure_ops.hpp"
#include "nlhj/polar_grid.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace nlhj;

namespace {

const Vec xi0_1d = make_vec({0.0});
const Vec xi0_2d = make_vec({0.0, 0.0});

}  // namespace

TEST_CASE("density_at: pure power law") {
  const auto fam = LevyFamily::fractional(1, 1.0, 1.0);
  // 1 / 0.5^2 = 4
  CHECK(density_at(fam, xi0_1d, make_vec({0.5})) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(density_at(fam, xi0_1d, make_vec({0.0})), ZeroPoint);
}

TEST_CASE("density_at: variable order at |z| = 1") {
  const auto fam = LevyFamily::variable_order(
      1, [](const Vec&) { return 1.5; }, 0.5, 1.5);
  CHECK(density_at(fam, xi0_1d, make_vec({1.0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(density_at(fam, xi0_1d, make_vec({-1.0})) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("density_at: rotated quadrant indicator") {
  const auto fam = LevyFamily::rotated_quadrant(1.0);
  const Vec xi = make_vec({1.0, 0.0});  // theta = 0, no rotation
  CHECK(density_at(fam, xi, make_vec({-0.5, -0.5})) == 0.0);
  CHECK(density_at(fam, xi, make_vec({0.5, 0.5})) ==
        doctest::Approx(std::pow(std::sqrt(0.5), -3.0)));
}

TEST_CASE("density_at: finite atomic has none") {
  const auto fam = LevyFamily::finite_atomic(1, {{make_vec({0.5}), 1.0}});
  CHECK_THROWS_AS(density_at(fam, xi0_1d, make_vec({0.5})), NoDensity);
}

TEST_CASE("density_at: levy-ito density through the inverse jump") {
  // j = 2z pushes |w|^{-2} dw to (1/2) |z/2|^{-2} dz = 2 |z|^{-2} dz
  auto fam = LevyFamily::levy_ito(
      LevyFamily::fractional(1, 1.0, 1.0),
      [](const Vec&, const Vec& z) { return Vec(2.0 * z); }, 2.0, 2.0);
  CHECK(density_at(fam, xi0_1d, make_vec({1.0})) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("LevyFamily rejects atoms at the origin") {
  CHECK_THROWS(LevyFamily::finite_atomic(1, {{make_vec({0.0}), 1.0}}));
}

TEST_CASE("moment2_ball: closed forms of the fractional kernel") {
  // int_{B_r} |z|^2 |z|^{-(1+sigma)} dz = vol(dB) r^{2-sigma} / (2-sigma), N = 1
  struct Case {
    Real sigma, lambda, r, expect;
  };
  const Case cases[] = {
      {1.0, 1.0, 1.0, 2.0},
      {0.5, 1.0, 1.0, 2.0 / 1.5},
      {1.5, 2.0, 1.0, 2.0 * 2.0 / 0.5},
      {1.0, 1.0, 0.25, 2.0 * 0.25},
  };
  for (const auto& c : cases) {
    const auto fam = LevyFamily::fractional(1, c.sigma, c.lambda);
    CHECK(moment2_ball(fam, xi0_1d, c.r) == doctest::Approx(c.expect).epsilon(1e-3));
  }
}

TEST_CASE("moment2_ball: atoms in and out of the ball") {
  const auto fam = LevyFamily::finite_atomic(1, {{make_vec({0.5}), 1.0}});
  CHECK(moment2_ball(fam, xi0_1d, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(moment2_ball(fam, xi0_1d, 0.4) == 0.0);
}

TEST_CASE("moment2_ball: nondecreasing in r and self-similar for power laws") {
  const auto fam = LevyFamily::fractional(2, 1.3, 0.7);
  const Vec xi = xi0_2d;
  Real prev = 0;
  Real ratio0 = 0;
  for (Real r : {0.25, 0.5, 1.0, 2.0}) {
    const Real m2 = moment2_ball(fam, xi, r);
    CHECK(m2 >= prev);
    prev = m2;
    const Real ratio = m2 / std::pow(r, 2.0 - 1.3);
    if (ratio0 == 0) ratio0 = ratio;
    CHECK(ratio == doctest::Approx(ratio0).epsilon(0.01));  // scaling law within 1%
  }
}

TEST_CASE("moment2_ball: order >= 2 singularity is caught") {
  DensitySpec d;
  d.kernel = [](const Vec&, const Vec& z) { return std::pow(z.norm(), -3.5); };  // N+2.5
  d.order = 1.9;  // declared below 2, actual decay above
  d.ellipticity = 1.0;
  const LevyFamily fam(1, std::move(d));
  CHECK_THROWS_AS(moment2_ball(fam, xi0_1d, 1.0), QuadratureDivergence);
}

TEST_CASE("tail_mass: closed forms and monotone decay") {
  // int_{|z|>R} Lambda |z|^{-(1+sigma)} dz = (Lambda/sigma) vol(dB) R^{-sigma}
  const auto fam = LevyFamily::fractional(1, 1.0, 1.0);
  CHECK(tail_mass(fam, xi0_1d, 2.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(tail_mass(fam, xi0_1d, 4.0) == doctest::Approx(0.5).epsilon(1e-3));
  Real prev = std::numeric_limits<Real>::infinity();
  for (Real R : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const Real t = tail_mass(fam, xi0_1d, R);
    CHECK(t <= prev);
    prev = t;
  }
}

TEST_CASE("tail_mass: compact support and quadrant tail") {
  const auto atom = LevyFamily::finite_atomic(1, {{make_vec({0.5}), 1.0}});
  CHECK(tail_mass(atom, xi0_1d, 1.0) == 0.0);

  // quarter of the isotropic 1/|z|^3 tail in R^2: hand polar quadrature
  const auto rq = LevyFamily::rotated_quadrant(1.0);
  const Real oracle =
      0.25 * 2.0 * M_PI *
      oracles::adaptive_simpson([](Real rho) { return std::pow(rho, -2.0); }, 1.0, 1e7,
                                1e-12) ;
  CHECK(tail_mass(rq, make_vec({1.0, 0.0}), 1.0) ==
        doctest::Approx(oracle).epsilon(1e-2));
  CHECK(tail_mass(rq, make_vec({1.0, 0.0}), 1.0) == doctest::Approx(M_PI / 2).epsilon(1e-6));
}

TEST_CASE("discretize: finite atomic round-trips exactly") {
  const std::vector<PointMass> atoms = {{make_vec({0.5}), 1.25}, {make_vec({-0.8}), 0.5}};
  const auto fam = LevyFamily::finite_atomic(1, atoms);
  const auto grid = PolarGrid::defaults(1);
  const auto mu = discretize(fam, xi0_1d, grid);
  REQUIRE(mu.atoms.size() == 2);
  CHECK(mu.atoms[0].z[0] == 0.5);
  CHECK(mu.atoms[0].mass == 1.25);
  CHECK(mu.atoms[1].z[0] == -0.8);
  CHECK(mu.atoms[1].mass == 0.5);
}

TEST_CASE("discretize: annulus mass matches the closed form") {
  // grid covering exactly (0.5, 1]; total mass = vol(dB)(r^{-s} - R^{-s})/s
  const auto fam = LevyFamily::fractional(1, 1.0, 1.0);
  const auto grid = PolarGrid::make(1, 0.5, 1.0);
  const auto mu = discretize(fam, xi0_1d, grid);
  CHECK(mu.total_mass() == doctest::Approx(2.0).epsilon(1e-6));

  const auto fam05 = LevyFamily::fractional(1, 0.5, 1.0);
  const auto mu05 = discretize(fam05, xi0_1d, grid);
  const Real expect = 2.0 * (std::pow(0.5, -0.5) - 1.0) / 0.5;
  CHECK(mu05.total_mass() == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("discretize: identity levy-ito equals its base") {
  auto base = LevyFamily::fractional(1, 0.8, 1.0);
  auto li = LevyFamily::levy_ito(
      base, [](const Vec&, const Vec& z) { return z; }, 1.0, 1.0);
  const auto grid = PolarGrid::make(1, 1e-3, 4.0);
  const auto mu_base = discretize(base, xi0_1d, grid);
  const auto mu_li = discretize(li, xi0_1d, grid);
  REQUIRE(mu_base.atoms.size() == mu_li.atoms.size());
  for (size_t k = 0; k < mu_base.atoms.size(); ++k) {
    CHECK((mu_li.atoms[k].z - mu_base.atoms[k].z).norm() == 0.0);
    CHECK(mu_li.atoms[k].mass == mu_base.atoms[k].mass);
  }
}

TEST_CASE("discretize: mass conservation across families") {
  const auto grid1 = PolarGrid::make(1, 1e-3, 8.0);
  const auto grid2 = PolarGrid::make(2, 1e-3, 8.0);
  const Vec xi1 = make_vec({0.7});
  const Vec xi2 = make_vec({0.7, -0.2});

  const auto wf = LevyFamily::weighted_fractional(1, 1.2, 1.0, 0.5);
  CHECK(discretize(wf, xi1, grid1).total_mass() ==
        doctest::Approx(annulus_mass(wf, xi1, grid1.r0, grid1.r_max)).epsilon(1e-8));

  const auto wf2 = LevyFamily::weighted_fractional(2, 0.7, 2.0, 0.5);
  CHECK(discretize(wf2, xi2, grid2).total_mass() ==
        doctest::Approx(annulus_mass(wf2, xi2, grid2.r0, grid2.r_max)).epsilon(1e-8));

  const auto vo = LevyFamily::variable_order(
      1, [](const Vec& xi) { return 1.0 + 0.4 * std::sin(xi[0]); }, 0.5, 1.5, 0.4);
  CHECK(discretize(vo, xi1, grid1).total_mass() ==
        doctest::Approx(annulus_mass(vo, xi1, grid1.r0, grid1.r_max)).epsilon(1e-8));

  const auto rq = LevyFamily::rotated_quadrant(1.0);
  const Vec on_sphere = make_vec({std::cos(0.9), std::sin(0.9)});
  CHECK(discretize(rq, on_sphere, grid2).total_mass() ==
        doctest::Approx(annulus_mass(rq, on_sphere, grid2.r0, grid2.r_max)).epsilon(1e-8));
}

TEST_CASE("discretize: oscillatory kernel on a coarse grid is rejected") {
  DensitySpec d;
  d.kernel = [](const Vec&, const Vec& z) {
    const Real rho = z.norm();
    return std::pow(rho, -1.5) * (1.0 + 0.9 * std::sin(300.0 * rho));
  };
  d.order = 0.5;
  d.ellipticity = 2.0;
  const LevyFamily fam(1, std::move(d));
  const auto grid = PolarGrid::make(1, 0.1, 8.0, 2.0);  // deliberately coarse shells
  CHECK_THROWS_AS(discretize(fam, xi0_1d, grid), GridTooCoarse);
  DiscretizeOptions lax;
  lax.validate = false;
  CHECK_NOTHROW(discretize(fam, xi0_1d, grid, lax));
}

TEST_CASE("pushforward_discretize: scaling, identity, rotation") {
  const auto grid = PolarGrid::make(1, 1e-3, 4.0);
  auto base_atom = LevyFamily::finite_atomic(1, {{make_vec({0.3}), 1.0}});

  auto doubler = LevyFamily::levy_ito(
      base_atom, [](const Vec&, const Vec& z) { return Vec(2.0 * z); }, 2.0, 2.0);
  const auto mu = pushforward_discretize(doubler, xi0_1d, grid);
  REQUIRE(mu.atoms.size() == 1);
  CHECK(mu.atoms[0].z[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(mu.atoms[0].mass == 1.0);

  // rotation by |xi| preserves radii and masses
  auto base2 = LevyFamily::fractional(2, 1.0, 1.0);
  auto rot = LevyFamily::levy_ito(
      base2,
      [](const Vec& xi, const Vec& z) {
        const Real a = xi.norm();
        return make_vec({std::cos(a) * z[0] - std::sin(a) * z[1],
                         std::sin(a) * z[0] + std::cos(a) * z[1]});
      },
      1.0, 1.0);
  const auto grid2 = PolarGrid::make(2, 1e-2, 2.0, 1.4142135623730951, 16);
  const Vec xi = make_vec({0.4, 0.3});
  const auto mu_base = discretize(base2, make_vec({0.0, 0.0}), grid2);
  const auto mu_rot = pushforward_discretize(rot, xi, grid2);
  Real mass_base = 0, mass_rot = 0;
  REQUIRE(mu_base.atoms.size() == mu_rot.atoms.size());
  for (size_t k = 0; k < mu_rot.atoms.size(); ++k) {
    CHECK(mu_rot.atoms[k].z.norm() == doctest::Approx(mu_base.atoms[k].z.norm()).epsilon(1e-13));
    CHECK(mu_rot.atoms[k].mass == mu_base.atoms[k].mass);  // push-forward keeps mass
    mass_base += mu_base.atoms[k].mass;
    mass_rot += mu_rot.atoms[k].mass;
  }
  CHECK(mass_rot == mass_base);
}

TEST_CASE("pushforward_discretize: out-of-band jump rejected") {
  auto bad = LevyFamily::levy_ito(
      LevyFamily::finite_atomic(1, {{make_vec({0.3}), 1.0}}),
      [](const Vec&, const Vec& z) { return Vec(3.0 * z); }, 2.0, 2.0);
  CHECK_THROWS_AS(pushforward_discretize(bad, xi0_1d, PolarGrid::make(1, 1e-3, 4.0)),
                  JumpOutOfBounds);
}

TEST_CASE("levy-ito moments through the jump") {
  // j = 2z on the sigma = 1 kernel: nu^j has m2(B_r) = 2 * m2_base(B_{r/2}) * 4 / 2
  // computed directly: int |j|^2 1_{|j|<=r} = 4 int_{|z|<=r/2} |z|^2 nu(dz)
  auto li = LevyFamily::levy_ito(
      LevyFamily::fractional(1, 1.0, 1.0),
      [](const Vec&, const Vec& z) { return Vec(2.0 * z); }, 2.0, 2.0);
  const auto base = LevyFamily::fractional(1, 1.0, 1.0);
  const Real got = moment2_ball(li, xi0_1d, 1.0);
  const Real expect = 4.0 * moment2_ball(base, xi0_1d, 0.5);
  CHECK(got == doctest::Approx(expect).epsilon(1e-6));

  // tails: int 1_{|j|>R} nu = tail_base(R/2)
  CHECK(tail_mass(li, xi0_1d, 2.0) ==
        doctest::Approx(tail_mass(base, xi0_1d, 1.0)).epsilon(1e-6));
}

TEST_CASE("validate_samples flags out-of-band kernels") {
  DensitySpec d;
  d.kernel = [](const Vec&, const Vec& z) { return 2.0 * std::pow(z.norm(), -2.0); };
  d.ellipticity = 1.0;  // cap too small for the factor 2
  d.order = 1.0;
  const LevyFamily fam(1, std::move(d));
  CHECK_THROWS(fam.validate_samples({xi0_1d}, {make_vec({0.5})}));
}
