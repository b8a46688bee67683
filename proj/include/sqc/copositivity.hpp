#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>

#include "sqc/cones.hpp"
#include "sqc/linalg.hpp"

namespace sqc {

enum class CopositivityStatus { Copositive, NotCopositive, Inconclusive };

/// Proof object for K-copositivity queries.
/// Copositive with rho present means A - rho J is PSD at tolerance (Lorentz
/// S-lemma route). NotCopositive always carries a witness x in K that passes
/// the exact membership inequalities with <Ax,x> < -tol |x|^2.
struct CopositivityCertificate {
  CopositivityStatus status = CopositivityStatus::Inconclusive;
  std::optional<double> rho;
  double psd_floor = 0.0;  // lambda_min(A - rho J) at the search optimum
  std::optional<Eigen::VectorXd> witness;
};

/// lambda_min(A - rho J) with J = diag(1, -1, ..., -1); concave in rho.
double lorentz_slemma_value(const SymmetricMatrix& a, double rho);

/// Exact Lorentz copositivity via the S-lemma: A is L-copositive iff
/// max_{rho >= 0} lambda_min(A - rho J) >= 0. The concave maximization is
/// done by golden-section search over [0, R], R = 2 |A|_F + 1, widening R
/// when the maximizer lands at the right endpoint. When the maximum stays
/// below -tol a violating direction is assembled from the bottom eigenspace
/// of A - rho* J and re-verified exactly; if that assembly fails the result
/// is Inconclusive rather than a guess.
CopositivityCertificate lorentz_copositive(const SymmetricMatrix& a, double tol);

/// Sampling refuter for general cones: minimizes q_A over K n S^{n-1} from
/// seeded samples with local projected descent from the best 10 starts.
/// Returns Copositive only via the PSD sufficient shortcut; otherwise
/// NotCopositive with an exactly verified witness, or Inconclusive
/// ("no violation found").
CopositivityCertificate sampled_copositive(const SymmetricMatrix& a, const ConeSpec& k,
                                           long samples, std::uint64_t seed, double tol);

enum class ZPropertyStatus { Consistent, Violated };

struct ZPropertyResult {
  ZPropertyStatus status = ZPropertyStatus::Consistent;
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> witness_pair;
  double worst = 0.0;  // largest <Ax, y> seen over the sampled pairs
};

/// Z-property check over sampled complementary pairs (x, y), x in K,
/// y in K*, <x,y> = 0; self-dual cones only (orthant: complementary
/// supports including all canonical pairs; Lorentz: boundary pairs
/// y = 2 x_1 e^1 - x). Violated when some pair has <Ax, y> > tol.
ZPropertyResult z_property_sampled(const SymmetricMatrix& a, const ConeSpec& k, long pairs,
                                   std::uint64_t seed, double tol);

}  // namespace sqc
