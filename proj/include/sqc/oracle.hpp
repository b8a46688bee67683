#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqc/cones.hpp"
#include "sqc/linalg.hpp"

namespace sqc {

/// Endpoint pair for a minimal geodesic probe inside the cap.
struct GeodesicSample {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double theta = 0.0;  // arccos <x, y> in (0, pi)
  int grid = 0;        // interior parameters evaluated
};

enum class CounterexampleKind { Geodesic, Pairwise, Sublevel };

/// Self-contained refutation record: everything needed to recompute the
/// violation from scratch is stored, so re-verification needs no optimizer
/// state.
struct Counterexample {
  CounterexampleKind kind = CounterexampleKind::Geodesic;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double t = 0.0;      // geodesic parameter / convex-combination weight
  double level = 0.0;  // sublevel threshold c (Sublevel only)
  std::string detail;  // pairwise subtest "b" or "c"
  double margin = 0.0;
};

struct OracleResult {
  bool violated = false;
  std::optional<Counterexample> counterexample;
  long samples_used = 0;
  std::vector<std::string> diagnostics;
};

/// Point at arc-length fraction t on the minimal geodesic from x to y:
/// gamma(t) = (sin((1-t) theta) x + sin(t theta) y) / sin(theta).
/// Throws DegenerateGeodesic for (near-)equal or (near-)antipodal endpoints.
Eigen::VectorXd geodesic_point(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t);

/// phi_A(x) = <Ax, x> / |x|^2; degree-0 homogeneous. Throws on x = 0.
double rayleigh(const SymmetricMatrix& a, const Eigen::VectorXd& x);

/// Samples endpoint pairs in int(K) n S^{n-1} (a tenth biased near the
/// boundary), scans q_A on `grid` interior points of each minimal geodesic
/// plus a golden-section refinement of the arc maximum, and reports the first
/// exactly re-verified point with q_A(gamma(t)) > max(q_A(x), q_A(y)) + tol.
/// Found violations are shrunk to the smallest violating sub-arc.
OracleResult geodesic_quasiconvexity_test(const SymmetricMatrix& a, const ConeSpec& k,
                                          long samples, int grid, std::uint64_t seed, double tol);

/// Pairwise inequality probes: (b) <Ax,y> <= <x,y> max(q_A(x), q_A(y)) on
/// pairs from K n S^{n-1}; (c) <Ax,y>/<x,y> <= max(phi_A(x), phi_A(y)) on
/// scaled pairs from K with |<x,y>| > 1e-8.
OracleResult pairwise_test(const SymmetricMatrix& a, const ConeSpec& k, long pairs,
                           std::uint64_t seed, double tol);

/// Convexity probe of the sublevel cones [phi_A <= c] = {x in int K :
/// <(A - cI)x, x> <= 0} at `levels` thresholds drawn from (lambda_1,
/// lambda_n): midpoints and random convex combinations of sampled members
/// must stay in the set. Levels with too few members are skipped with a
/// diagnostic.
OracleResult sublevel_convexity_test(const SymmetricMatrix& a, const ConeSpec& k, int levels,
                                     long pairs, std::uint64_t seed, double tol);

/// Exact violation margins used both by the samplers and for cross-checks.
double geodesic_violation_margin(const SymmetricMatrix& a, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, double t);
double pairwise_b_margin(const SymmetricMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y);
double pairwise_c_margin(const SymmetricMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y);
double sublevel_violation_margin(const SymmetricMatrix& a, double level, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, double t);

/// Recomputes the stored counterexample's margin by direct evaluation and
/// checks the stored witnesses still pass the cone membership inequalities.
/// Throws std::logic_error when the record is not internally consistent.
double reverify_counterexample(const SymmetricMatrix& a, const ConeSpec& k,
                               const Counterexample& ce);

}  // namespace sqc
