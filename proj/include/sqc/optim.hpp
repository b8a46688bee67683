#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "sqc/cones.hpp"

namespace sqc::optim {

using Objective = std::function<double(const Eigen::VectorXd&)>;
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using Feasible = std::function<bool(const Eigen::VectorXd&)>;
using Retract = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct CapSettings {
  int max_iter = 600;
  double stationarity_tol = 1e-9;
  double min_step = 1e-14;
  double initial_step = 0.25;
};

struct CapResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  bool stationary = false;  // tangential gradient reached stationarity_tol
  bool converged = false;   // stationary, or multi-start consensus on the best value
};

/// Projected gradient descent for min f over {feasible} n S^{n-1} from one
/// start. Steps are retracted back to the sphere (and toward the cone where a
/// closed-form projection exists); only feasible candidates are accepted by
/// the Armijo backtracking line search. `start` must be feasible and unit.
CapResult descend(const Objective& f, const Gradient& g, const Feasible& feasible,
                  const Retract& retract, const Eigen::VectorXd& start,
                  const CapSettings& settings = {});

/// Runs `descend` from every start and keeps the best value. `converged` is
/// set when some run was stationary or at least three runs agree with the
/// best value to 1e-9 (consensus), which is how boundary optima present.
CapResult multistart_descend(const Objective& f, const Gradient& g, const Feasible& feasible,
                             const Retract& retract, const std::vector<Eigen::VectorXd>& starts,
                             const CapSettings& settings = {});

/// Retraction for K n S^{n-1}: project to the cone where a closed form exists
/// (orthant clamp, Lorentz projection), then normalize. Elliptic cones are
/// only normalized; line-search feasibility rejection handles the rest.
Retract cone_retraction(const ConeSpec& k);

/// Exact feasibility predicate margin(x) >= -tol.
Feasible cone_feasibility(const ConeSpec& k, double tol);

/// Gradient (or a subgradient at kinks) of the cone margin function.
Eigen::VectorXd margin_gradient(const ConeSpec& k, const Eigen::VectorXd& x);

/// min / max of q_A over K n S^{n-1} by multi-start projected descent/ascent.
struct CapRange {
  double min_value = 0.0;
  double max_value = 0.0;
  Eigen::VectorXd argmin;
  Eigen::VectorXd argmax;
  bool min_converged = false;
  bool max_converged = false;
};

CapRange quadratic_cap_range(const SymmetricMatrix& a, const ConeSpec& k, int starts,
                             std::uint64_t seed, const CapSettings& settings = {});

/// Minimum of q_A over K n S^{n-1} only (argmin in CapResult::x).
CapResult quadratic_cap_min(const SymmetricMatrix& a, const ConeSpec& k, int starts,
                            std::uint64_t seed, const CapSettings& settings = {});

}  // namespace sqc::optim
