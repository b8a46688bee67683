#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "sqc/errors.hpp"
#include "sqc/linalg.hpp"
#include "sqc/rng.hpp"

namespace sqc {

enum class ConeKind { Orthant, Lorentz, Elliptic };

enum class Ternary { Yes, No, Inconclusive };

/// Description of a proper convex cone: the nonnegative orthant, the Lorentz
/// (second-order) cone, or an elliptic cone
///   { x : <axis, x> >= sqrt( sum_i weights_i <basis_i, x>^2 ) }
/// with {axis, basis columns} orthonormal and weights >= 0. A zero weight is
/// allowed (the cone is then flagged degenerate: it contains the span of that
/// basis vector and is no longer pointed, but membership stays evaluable).
///
/// Any spec can be negated, which represents -K via margin(x; -K) = margin(-x; K).
class ConeSpec {
 public:
  static ConeSpec orthant(int n);
  static ConeSpec lorentz(int n);
  static ConeSpec elliptic(const Eigen::VectorXd& axis, const Eigen::MatrixXd& basis,
                           const Eigen::VectorXd& weights);

  ConeKind kind() const { return kind_; }
  int n() const { return n_; }
  bool is_negated() const { return negated_; }
  bool self_dual() const { return kind_ != ConeKind::Elliptic; }
  bool degenerate() const { return degenerate_; }

  const Eigen::VectorXd& axis() const { return axis_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// The reflected cone -K.
  ConeSpec negated() const;

  std::string describe() const;

 private:
  ConeSpec() = default;
  ConeKind kind_ = ConeKind::Orthant;
  int n_ = 0;
  bool negated_ = false;
  bool degenerate_ = false;
  Eigen::VectorXd axis_;    // elliptic only
  Eigen::MatrixXd basis_;   // elliptic only; columns are the non-axis directions
  Eigen::VectorXd weights_; // elliptic only
};

/// Signed slack of the cone's defining inequality at x: >= 0 inside,
/// < 0 outside. Orthant: min_i x_i. Lorentz: x_1 - |x_rest|.
/// Elliptic: <axis,x> - sqrt(sum_i w_i <b_i,x>^2).
double margin(const ConeSpec& k, const Eigen::VectorXd& x);

/// margin(x) >= -tol (additive tolerance on the defining inequality).
bool contains(const ConeSpec& k, const Eigen::VectorXd& x, double tol);

/// Strict interior test: margin(x) >= +interior_margin.
bool strictly_contains(const ConeSpec& k, const Eigen::VectorXd& x, double interior_margin);

/// Minimally repairs a point that sits within rounding error of the cone so
/// that the recomputed margin is >= 0 exactly (orthant: clamp; Lorentz and
/// elliptic: raise the axis coordinate). Points far outside come back
/// unchanged; callers must re-test membership.
Eigen::VectorXd snap_into_cone(const ConeSpec& k, const Eigen::VectorXd& x);

struct DualOptions {
  double tol = 1e-9;
  int starts = 32;
  long samples = 4000;
  int max_iter = 400;
  std::uint64_t seed = 42;
};

/// Dual-cone membership. Orthant/Lorentz are self-dual, so this is `contains`
/// and the answer is always Yes/No. For elliptic cones the test minimizes
/// <y, x> over unit generators x of the cone with multi-start projected
/// descent; a non-converged search reports Inconclusive rather than guessing.
Ternary dual_contains(const ConeSpec& k, const Eigen::VectorXd& y, double tol);
Ternary dual_contains(const ConeSpec& k, const Eigen::VectorXd& y, const DualOptions& opts);

/// Moreau split x = plus - minus with plus in K, minus in K*, <plus,minus> = 0.
/// abs = plus + minus.
struct MoreauParts {
  Eigen::VectorXd plus;
  Eigen::VectorXd minus;
  Eigen::VectorXd abs;
};

/// Projection onto the Lorentz cone and the induced Moreau parts.
/// Total function: the x in L / -x in L cases are split off exactly before
/// the general formula (which divides by |x_rest|).
MoreauParts project_lorentz(const Eigen::VectorXd& x);

/// Lorentz absolute value |x|^L = plus + minus. Requires x != 0.
Eigen::VectorXd abs_lorentz(const Eigen::VectorXd& x);

/// Closed-form Moreau decomposition; Orthant and Lorentz only.
/// Throws UnsupportedCone for elliptic cones.
MoreauParts moreau_decompose(const ConeSpec& k, const Eigen::VectorXd& x);

/// The level cone L_c of a spectral decomposition: elliptic cone with axis v^1,
/// basis v^2..v^n and weights theta_i(c) = (lambda_i - c)/(c - lambda_1).
/// Requires lambda_1 < c <= lambda_2. At c = lambda_2 with multiplicity the
/// corresponding weights vanish and the result is flagged degenerate.
ConeSpec elliptic_levelcone(const SpectralDecomposition& dec, double c);

/// The cone W = (L_c u -L_c) n int(K) for c in (lambda_1, lambda_2].
struct WConeSpec {
  SpectralDecomposition decomposition;
  ConeSpec base_cone;
  double c;
  ConeSpec level_cone;

  /// c defaults to lambda_2.
  static WConeSpec make(const SpectralDecomposition& dec, const ConeSpec& base);
  static WConeSpec make(const SpectralDecomposition& dec, const ConeSpec& base, double c);
};

/// True iff x lies in W (within the given tolerances): x in int(K) and
/// x in L_c or -x in L_c.
bool w_contains(const WConeSpec& w, const Eigen::VectorXd& x, double membership_tol,
                double interior_margin);

struct WDualOutcome {
  Ternary status = Ternary::Inconclusive;
  double min_value = 0.0;                  // best <v, x> over sampled W n S^{n-1}
  std::optional<Eigen::VectorXd> witness;  // x in W with <v, x> < -10 tol (No only)
  std::string diagnostic;
};

/// Numerical membership test v in W*: minimizes <v, x> over x in W n S^{n-1}
/// by seeded sampling plus local descent. Yes requires the minimum >= -tol
/// with a converged search; No requires a witness that re-verifies by the
/// exact membership inequalities; anything else is Inconclusive.
WDualOutcome w_dual_contains(const WConeSpec& w, const Eigen::VectorXd& v, long samples,
                             double tol, std::uint64_t seed);

enum class IntersectionStatus { Trivial, Nontrivial, Inconclusive };

struct IntersectionResult {
  IntersectionStatus status = IntersectionStatus::Inconclusive;
  double best_joint_margin = 0.0;
  std::optional<Eigen::VectorXd> witness;  // unit vector in both cones (Nontrivial only)
};

/// Decides whether K n L = {0} by multi-start maximization of
/// min(margin_K, margin_L) over the unit sphere. Nontrivial needs a unit
/// vector passing both exact membership tests; Trivial needs the maximized
/// joint margin to stay <= -tol across all starts.
IntersectionResult intersection_trivial(const ConeSpec& k, const ConeSpec& l, int budget,
                                        double tol, std::uint64_t seed);

/// Draws a unit vector with margin > min_margin inside K. Cone-specific
/// parametric samplers are used where available; elliptic falls back to a
/// parametrization of the defining inequality. Throws SamplingExhausted when
/// the rejection budget runs out.
Eigen::VectorXd sample_cap(const ConeSpec& k, Rng& rng, double min_margin, long budget = 100000);

/// Biased variant used to stress boundaries: margin is pushed below
/// `max_margin` (relative to the unit vector) but stays strictly positive.
Eigen::VectorXd sample_cap_near_boundary(const ConeSpec& k, Rng& rng, double max_margin,
                                         long budget = 100000);

}  // namespace sqc
