#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nlhj {

using Real = double;

/// Spatial point in dimension N <= 3. Dynamic size with fixed capacity,
/// so points live on the stack and Eigen expressions work as usual.
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

inline Vec zero_vec(int dim) { return Vec::Zero(dim); }

inline Vec make_vec(std::initializer_list<Real> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (Real x : xs) v[i++] = x;
  return v;
}

// ---------------------------------------------------------------------------
// Error types. One exception class per contract violation named in the
// module interfaces; all derive from Error so callers can catch coarsely.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroPoint : Error { using Error::Error; };
struct NoDensity : Error { using Error::Error; };
struct QuadratureDivergence : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct JumpOutOfBounds : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct TooManyAtoms : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct NotLevyIto : Error { using Error::Error; };
struct MissingFarField : Error { using Error::Error; };
struct CFLViolation : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct CertificationFailed : Error { using Error::Error; };
struct OrderingViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Small shared utilities.
// ---------------------------------------------------------------------------

/// Runs fn(i) for i in [0, n) on up to `threads` worker threads.
/// Block partition with deterministic assignment; fn must only write to
/// slots it owns. threads <= 1 runs inline.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || n < 2 * threads) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// FNV-1a, used to stamp configs and grids into output files.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nlhj
