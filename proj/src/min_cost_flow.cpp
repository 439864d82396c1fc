#include "min_cost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace nlhj::detail {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

}  // namespace

TransportFlow solve_transport(const std::vector<Real>& supply,
                              const std::vector<Real>& demand,
                              const std::function<long long(int, int)>& cost) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  const int V = m + n;  // sources 0..m-1, sinks m..m+n-1

  Real total = 0;
  for (Real s : supply) {
    if (s < 0) throw Error("solve_transport: negative supply");
    total += s;
  }
  Real total_d = 0;
  for (Real d : demand) {
    if (d < 0) throw Error("solve_transport: negative demand");
    total_d += d;
  }
  const Real scale = std::max<Real>(1, std::max(total, total_d));
  if (std::abs(total - total_d) > 1e-9 * scale)
    throw Error("solve_transport: unbalanced instance");

  // Augmentations push the exact minimum of the path bottlenecks, so supplies,
  // demands and backward arcs hit exact zero; the residual threshold only
  // mops up the last floating-point crumbs. Callers re-derive reservoir arcs
  // from the marginals afterwards.
  const Real crumb = 1e-13 * scale;

  std::vector<Real> rem_supply = supply;
  std::vector<Real> rem_demand = demand;
  std::vector<std::map<int, Real>> flow(m);  // flow[i][j] > 0

  std::vector<long long> pot(V, 0);
  std::vector<long long> dist(V);
  std::vector<int> parent(V);
  std::vector<char> settled(V);

  const long long max_rounds = 50LL * (V + 10) + 10000;

  for (long long round = 0;; ++round) {
    Real outstanding = 0;
    for (int j = 0; j < n; ++j) outstanding = std::max(outstanding, rem_demand[j]);
    if (outstanding <= crumb) break;
    if (round > max_rounds)
      throw Error("solve_transport: augmentation cap exceeded");

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(settled.begin(), settled.end(), 0);
    for (int i = 0; i < m; ++i)
      if (rem_supply[i] > crumb) dist[i] = 0;

    int target = -1;
    while (true) {
      int u = -1;
      long long best = kInf;
      for (int v = 0; v < V; ++v)  // lowest index wins ties
        if (!settled[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      if (u < 0) break;
      settled[u] = 1;
      if (u >= m && rem_demand[u - m] > crumb) {
        target = u;
        break;
      }
      if (u < m) {
        for (int j = 0; j < n; ++j) {
          const int v = m + j;
          if (settled[v]) continue;
          const long long nd = dist[u] + std::max<long long>(cost(u, j) + pot[u] - pot[v], 0);
          if (nd < dist[v]) {
            dist[v] = nd;
            parent[v] = u;
          }
        }
      } else {
        const int j = u - m;
        for (int i = 0; i < m; ++i) {
          if (settled[i]) continue;
          auto it = flow[i].find(j);
          if (it == flow[i].end() || it->second <= 0) continue;
          const long long nd = dist[u] + std::max<long long>(-cost(i, j) + pot[u] - pot[i], 0);
          if (nd < dist[i]) {
            dist[i] = nd;
            parent[i] = u;
          }
        }
      }
    }
    if (target < 0)
      throw Error("solve_transport: no augmenting path while demand remains");

    const long long dt = dist[target];
    for (int v = 0; v < V; ++v) pot[v] += std::min(dist[v], dt);

    // bottleneck: start supply, end demand, and every backward arc on the path
    int root = target;
    while (parent[root] >= 0) root = parent[root];
    Real push = std::min(rem_demand[target - m], rem_supply[root]);
    for (int v = target; parent[v] >= 0; v = parent[v])
      if (v < m) push = std::min(push, flow[v].at(parent[v] - m));
    if (!(push > 0)) throw Error("solve_transport: zero bottleneck");

    for (int v = target; parent[v] >= 0; v = parent[v]) {
      const int u = parent[v];
      if (v >= m) {
        flow[u][v - m] += push;  // forward arc: source u -> sink v
      } else {
        auto it = flow[v].find(u - m);  // backward arc along sink u -> source v
        it->second -= push;
        if (it->second <= 0) flow[v].erase(it);
      }
    }
    rem_supply[root] -= push;
    if (rem_supply[root] < 0) rem_supply[root] = 0;
    rem_demand[target - m] -= push;
    if (rem_demand[target - m] < 0) rem_demand[target - m] = 0;
  }

  TransportFlow out;
  for (int i = 0; i < m; ++i)
    for (const auto& [j, f] : flow[i])
      if (f > 0) out.flows.emplace_back(i, j, f);
  return out;
}

}  // namespace nlhj::detail
