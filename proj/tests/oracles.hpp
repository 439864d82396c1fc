#pragma once

// Test-only oracles, independent of the library's computational paths.

#include "nlhj/core.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracles {

using nlhj::Real;

/// Exact optimum of a balanced transportation problem by enumerating the
/// vertices of the flow polytope: every vertex is the tree solution of a
/// spanning tree of the complete bipartite graph, so we enumerate spanning
/// trees, solve each by leaf peeling and keep the cheapest feasible one.
/// Exponential; meant for <= ~5 nodes per side.
inline Real brute_force_transport(const std::vector<Real>& supply,
                                  const std::vector<Real>& demand,
                                  const std::function<Real(int, int)>& cost) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  const int V = m + n;
  const int A = m * n;
  const int need = V - 1;

  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(A);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) arcs.emplace_back(i, m + j);

  Real best = std::numeric_limits<Real>::infinity();
  std::vector<int> chosen;
  chosen.reserve(need);

  std::function<int(std::vector<int>&, int)> find = [&](std::vector<int>& dsu, int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };

  std::function<void(int, std::vector<int>&)> rec = [&](int next, std::vector<int>& dsu) {
    if (static_cast<int>(chosen.size()) == need) {
      // solve the tree by leaf peeling
      std::vector<Real> bal(V);
      for (int i = 0; i < m; ++i) bal[i] = supply[i];
      for (int j = 0; j < n; ++j) bal[m + j] = -demand[j];
      std::vector<int> deg(V, 0);
      std::vector<std::vector<int>> inc(V);
      for (int a : chosen) {
        inc[arcs[a].first].push_back(a);
        inc[arcs[a].second].push_back(a);
        ++deg[arcs[a].first];
        ++deg[arcs[a].second];
      }
      std::vector<char> done_arc(need, 0), done_node(V, 0);
      std::vector<Real> flow_of(need, 0);
      bool feasible = true;
      for (int peel = 0; peel < V - 1 && feasible; ++peel) {
        int leaf = -1;
        for (int v = 0; v < V; ++v)
          if (!done_node[v] && deg[v] == 1) {
            leaf = v;
            break;
          }
        if (leaf < 0) {
          feasible = false;
          break;
        }
        int arc_idx = -1, pos = -1;
        for (size_t t = 0; t < inc[leaf].size(); ++t) {
          const int local = inc[leaf][t];
          const int global_pos =
              static_cast<int>(std::find(chosen.begin(), chosen.end(), local) - chosen.begin());
          if (!done_arc[global_pos]) {
            arc_idx = local;
            pos = global_pos;
            break;
          }
        }
        const int u = arcs[arc_idx].first, w = arcs[arc_idx].second;
        const Real f = leaf == u ? bal[u] : -bal[w];
        if (f < -1e-12) {
          feasible = false;
          break;
        }
        flow_of[pos] = std::max<Real>(f, 0);
        const int other = leaf == u ? w : u;
        bal[other] += bal[leaf];
        bal[leaf] = 0;
        done_arc[pos] = 1;
        done_node[leaf] = 1;
        --deg[u];
        --deg[w];
      }
      if (feasible) {
        Real c = 0;
        for (int t = 0; t < need; ++t)
          c += flow_of[t] * cost(arcs[chosen[t]].first, arcs[chosen[t]].second - m);
        best = std::min(best, c);
      }
      return;
    }
    if (next >= A) return;
    if (static_cast<int>(chosen.size()) + (A - next) < need) return;
    // include arcs[next] if it keeps the selection acyclic
    const int ru = find(dsu, arcs[next].first);
    const int rv = find(dsu, arcs[next].second);
    if (ru != rv) {
      std::vector<int> dsu2 = dsu;
      dsu2[ru] = rv;
      chosen.push_back(next);
      rec(next + 1, dsu2);
      chosen.pop_back();
    }
    rec(next + 1, dsu);
  };

  std::vector<int> dsu(V);
  std::iota(dsu.begin(), dsu.end(), 0);
  rec(0, dsu);
  return best;
}

/// Adaptive Simpson on [a, b].
inline Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b,
                             Real tol = 1e-10, int depth = 28) {
  std::function<Real(Real, Real, Real, Real, Real, Real, int)> go =
      [&](Real lo, Real hi, Real flo, Real fmid, Real fhi, Real whole, int d) -> Real {
    const Real mid = 0.5 * (lo + hi);
    const Real lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const Real flm = f(lm), frm = f(rm);
    const Real left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
    const Real right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15 * tol)
      return left + right + (left + right - whole) / 15;
    return go(lo, mid, flo, flm, fmid, left, d - 1) +
           go(mid, hi, fmid, frm, fhi, right, d - 1);
  };
  const Real mid = 0.5 * (a + b);
  const Real fa = f(a), fm = f(mid), fb = f(b);
  const Real whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return go(a, b, fa, fm, fb, whole, depth);
}

}  // namespace oracles
