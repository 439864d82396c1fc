#include "nlhj/transport.hpp"

#include "min_cost_flow.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>

namespace nlhj {

namespace {

using LocKey = std::array<Real, 3>;

LocKey key_of(const Vec& z) {
  LocKey k{0, 0, 0};
  for (int d = 0; d < z.size(); ++d) k[d] = z[d];
  return k;
}

/// Atom-aligned merge of two measures: location -> (m1, m2), deterministic
/// lexicographic order. Locations must match bitwise, which they do for
/// measures discretized on the same grid.
std::map<LocKey, std::pair<Real, Real>> merge_atoms(const DiscretizedMeasure& mu1,
                                                    const DiscretizedMeasure& mu2) {
  if (mu1.dim != mu2.dim) throw GridMismatch("measures live in different dimensions");
  if (mu1.grid_sig != 0 && mu2.grid_sig != 0 && mu1.grid_sig != mu2.grid_sig)
    throw GridMismatch("measures were discretized on different grids");
  std::map<LocKey, std::pair<Real, Real>> merged;
  for (const auto& a : mu1.atoms) merged[key_of(a.z)].first += a.mass;
  for (const auto& a : mu2.atoms) merged[key_of(a.z)].second += a.mass;
  return merged;
}

Real norm_of(const LocKey& k) {
  return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
}

Real pair_cost(const Vec& a, const Vec& b, Real p) {
  const Real d2 = (a - b).squaredNorm();
  return p == 2 ? d2 : std::pow(std::sqrt(d2), p);
}

}  // namespace

Real Coupling::cost(Real p) const {
  const Vec origin1 = zero_vec(mu1.dim);
  Real acc = 0;
  for (const auto& t : triples) {
    const Vec& z1 = t.src == kOrigin ? origin1 : mu1.atoms[t.src].z;
    const Vec& z2 = t.dst == kOrigin ? origin1 : mu2.atoms[t.dst].z;
    acc += t.mass * pair_cost(z1, z2, p);
  }
  return acc;
}

Real tv_annulus(const DiscretizedMeasure& mu1, const DiscretizedMeasure& mu2,
                Real r, Real R) {
  if (!(0 < r && r < R)) throw Error("tv_annulus: need 0 < r < R");
  Real acc = 0;
  for (const auto& [loc, masses] : merge_atoms(mu1, mu2)) {
    const Real nz = norm_of(loc);
    if (nz > r && nz <= R) acc += std::abs(masses.first - masses.second);
  }
  return acc;
}

Real tv_second_moment_ball(const DiscretizedMeasure& mu1,
                           const DiscretizedMeasure& mu2, Real r) {
  if (!(r > 0)) throw Error("tv_second_moment_ball: need r > 0");
  Real acc = 0;
  for (const auto& [loc, masses] : merge_atoms(mu1, mu2)) {
    const Real n2 = loc[0] * loc[0] + loc[1] * loc[1] + loc[2] * loc[2];
    // same closed-ball predicate as DiscretizedMeasure::restricted, so the
    // explicit coupling's cost reproduces this sum term by term
    if (std::sqrt(n2) <= r) acc += n2 * std::abs(masses.first - masses.second);
  }
  return acc;
}

Coupling explicit_coupling(const DiscretizedMeasure& mu1,
                           const DiscretizedMeasure& mu2, Real r) {
  Coupling c;
  c.mu1 = mu1.restricted(r);
  c.mu2 = mu2.restricted(r);
  c.radius = r;

  // index of each restricted atom by location
  std::map<LocKey, int> idx1, idx2;
  for (int i = 0; i < static_cast<int>(c.mu1.atoms.size()); ++i)
    idx1[key_of(c.mu1.atoms[i].z)] = i;
  for (int j = 0; j < static_cast<int>(c.mu2.atoms.size()); ++j)
    idx2[key_of(c.mu2.atoms[j].z)] = j;

  for (const auto& [loc, masses] : merge_atoms(c.mu1, c.mu2)) {
    const Real m1 = masses.first, m2 = masses.second;
    const Real common = std::min(m1, m2);
    const auto i1 = idx1.find(loc);
    const auto i2 = idx2.find(loc);
    if (common > 0) c.triples.push_back({i1->second, i2->second, common});
    if (m1 > m2)
      c.triples.push_back({i1->second, Coupling::kOrigin, m1 - m2});
    else if (m2 > m1)
      c.triples.push_back({Coupling::kOrigin, i2->second, m2 - m1});
  }
  return c;
}

TransportResult wasserstein_p_ball(const DiscretizedMeasure& mu1,
                                   const DiscretizedMeasure& mu2, Real r, Real p,
                                   const TransportOptions& opts) {
  if (!(r > 0)) throw Error("wasserstein_p_ball: need r > 0");
  if (!(p >= 1 && p <= 2)) throw Error("wasserstein_p_ball: p must lie in [1,2]");
  if (mu1.dim != mu2.dim) throw GridMismatch("measures live in different dimensions");

  TransportResult res;
  res.p = p;
  res.coupling.mu1 = mu1.restricted(r);
  res.coupling.mu2 = mu2.restricted(r);
  res.coupling.radius = r;
  auto& atoms1 = res.coupling.mu1.atoms;
  auto& atoms2 = res.coupling.mu2.atoms;
  const int n1 = static_cast<int>(atoms1.size());
  const int n2 = static_cast<int>(atoms2.size());
  if (n1 > opts.max_atoms_per_side || n2 > opts.max_atoms_per_side)
    throw TooManyAtoms("wasserstein_p_ball: " + std::to_string(std::max(n1, n2)) +
                       " atoms exceed the exact-solver cap of " +
                       std::to_string(opts.max_atoms_per_side));

  if (n1 == 0 && n2 == 0) {
    res.status = SolverStatus::Empty;
    return res;
  }

  // Exact costs between node i of side 1 (n1 = reservoir) and node j of
  // side 2 (n2 = reservoir).
  const Vec origin = zero_vec(mu1.dim);
  auto exact_cost = [&](int i, int j) -> Real {
    const Vec& a = i == n1 ? origin : atoms1[i].z;
    const Vec& b = j == n2 ? origin : atoms2[j].z;
    return pair_cost(a, b, p);
  };
  auto scaled_cost = [&](int i, int j) -> long long {
    return static_cast<long long>(std::llround(exact_cost(i, j) * opts.cost_scale));
  };

  Real s1 = 0, s2 = 0;
  std::vector<Real> supply(n1 + 1), demand(n2 + 1);
  for (int i = 0; i < n1; ++i) {
    supply[i] = atoms1[i].mass;
    s1 += atoms1[i].mass;
  }
  for (int j = 0; j < n2; ++j) {
    demand[j] = atoms2[j].mass;
    s2 += atoms2[j].mass;
  }
  supply[n1] = s2;  // reservoir can fill the whole opposite side
  demand[n2] = s1;

  const auto flow = detail::solve_transport(supply, demand, scaled_cost);

  // Re-derive the reservoir arcs from the marginals so that every real atom's
  // marginal is exact by construction (the solver leaves fp crumbs behind).
  std::vector<Real> routed1(n1, 0), routed2(n2, 0);
  for (const auto& [i, j, f] : flow.flows) {
    if (i < n1 && j < n2) {
      res.coupling.triples.push_back({i, j, f});
      routed1[i] += f;
      routed2[j] += f;
    }
  }
  for (int i = 0; i < n1; ++i) {
    const Real to_reservoir = atoms1[i].mass - routed1[i];
    if (to_reservoir > 0)
      res.coupling.triples.push_back({i, Coupling::kOrigin, to_reservoir});
  }
  for (int j = 0; j < n2; ++j) {
    const Real from_reservoir = atoms2[j].mass - routed2[j];
    if (from_reservoir > 0)
      res.coupling.triples.push_back({Coupling::kOrigin, j, from_reservoir});
  }

  res.cost = res.coupling.cost(p);
  res.status = SolverStatus::Optimal;
  return res;
}

bool check_admissible(const Coupling& c, Real tol) {
  std::vector<Real> sum1(c.mu1.atoms.size(), 0), sum2(c.mu2.atoms.size(), 0);
  for (const auto& t : c.triples) {
    if (t.mass < -tol) return false;
    if (t.src == Coupling::kOrigin && t.dst == Coupling::kOrigin && t.mass > 0)
      return false;  // gamma({(0,0)}) = 0
    if (t.src != Coupling::kOrigin) sum1[t.src] += t.mass;
    if (t.dst != Coupling::kOrigin) sum2[t.dst] += t.mass;
  }
  for (size_t i = 0; i < sum1.size(); ++i)
    if (std::abs(sum1[i] - c.mu1.atoms[i].mass) > tol) return false;
  for (size_t j = 0; j < sum2.size(); ++j)
    if (std::abs(sum2[j] - c.mu2.atoms[j].mass) > tol) return false;
  return true;
}

GigliBound gigli_bound_check(const Coupling& c) {
  if (!check_admissible(c)) throw NotAdmissible("gigli_bound_check: coupling is not admissible");
  GigliBound out;
  for (const auto& t : c.triples)
    if (t.src != Coupling::kOrigin) out.lhs += t.mass * c.mu1.atoms[t.src].z.squaredNorm();
  for (const auto& a : c.mu1.atoms) out.rhs += a.mass * a.z.squaredNorm();
  out.rhs *= 4;
  out.ok = out.lhs <= out.rhs * (1 + 1e-12) + 1e-300;
  return out;
}

void coupling_to_csv(const Coupling& c, std::ostream& os) {
  const int n = c.mu1.dim;
  const char* ax = "xyz";
  for (int d = 0; d < n; ++d) os << "src_" << ax[d] << ',';
  os << "src_is_origin,";
  for (int d = 0; d < n; ++d) os << "dst_" << ax[d] << ',';
  os << "dst_is_origin,mass\n";
  char buf[64];
  auto put = [&](Real x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  const Vec origin = zero_vec(n);
  for (const auto& t : c.triples) {
    const Vec& a = t.src == Coupling::kOrigin ? origin : c.mu1.atoms[t.src].z;
    const Vec& b = t.dst == Coupling::kOrigin ? origin : c.mu2.atoms[t.dst].z;
    for (int d = 0; d < n; ++d) {
      put(a[d]);
      os << ',';
    }
    os << (t.src == Coupling::kOrigin ? 1 : 0) << ',';
    for (int d = 0; d < n; ++d) {
      put(b[d]);
      os << ',';
    }
    os << (t.dst == Coupling::kOrigin ? 1 : 0) << ',';
    put(t.mass);
    os << '\n';
  }
}

std::string transport_result_to_json(const TransportResult& res, Real r) {
  nlohmann::json j;
  j["cost"] = res.cost;
  j["distance"] = res.distance();
  j["p"] = res.p;
  j["r"] = r;
  j["atoms_side1"] = res.coupling.mu1.atoms.size();
  j["atoms_side2"] = res.coupling.mu2.atoms.size();
  j["status"] = res.status == SolverStatus::Optimal ? "optimal" : "empty";
  return j.dump(2);
}

}  // namespace nlhj
