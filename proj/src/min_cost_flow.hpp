#pragma once

#include "nlhj/core.hpp"

#include <cstdint>
#include <functional>
#include <tuple>
#include <vector>

namespace nlhj::detail {

/// Exact solver for the dense transportation problem
///   min sum_{ij} c(i,j) f(i,j)  s.t.  sum_j f(i,j) = supply(i),
///                                     sum_i f(i,j) = demand(j),  f >= 0,
/// with integer costs (callers scale), real-valued balanced masses and the
/// complete bipartite arc set kept implicit. Successive shortest paths with
/// node potentials; Dijkstra ties break toward the lowest node index, which
/// makes the optimal flow deterministic.
struct TransportFlow {
  std::vector<std::tuple<int, int, Real>> flows;  // (source, sink, mass > 0)
};

TransportFlow solve_transport(const std::vector<Real>& supply,
                              const std::vector<Real>& demand,
                              const std::function<long long(int, int)>& cost);

}  // namespace nlhj::detail
