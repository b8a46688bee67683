#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqc/cones.hpp"
#include "sqc/copositivity.hpp"
#include "sqc/linalg.hpp"
#include "sqc/oracle.hpp"

namespace sqc {

enum class ConditionId {
  NecMultOne,
  NecLambda2Split,
  NecZProperty,
  SufTwoEig,
  SufBestIii,
  SufCountergg,
  SufAlphaEta,
  SufConvSl,
  CharSelfdualIv,
  CharLorentz2Eig,
};

enum class ConditionStatus { Holds, Fails, NotApplicable, Inconclusive };

enum class Verdict { CertifiedQuasiconvex, CertifiedNot, Unknown };

const char* to_string(ConditionId id);
const char* to_string(ConditionStatus status);
const char* to_string(Verdict verdict);

/// Ordered free-form record attached to a condition outcome: named scalars,
/// named vectors (witnesses), and notes. Insertion order is preserved so
/// serialized reports are deterministic.
struct Evidence {
  std::vector<std::pair<std::string, double>> numbers;
  std::vector<std::pair<std::string, Eigen::VectorXd>> vectors;
  std::vector<std::string> notes;

  Evidence& num(const std::string& key, double value) {
    numbers.emplace_back(key, value);
    return *this;
  }
  Evidence& vec(const std::string& key, const Eigen::VectorXd& value) {
    vectors.emplace_back(key, value);
    return *this;
  }
  Evidence& note(const std::string& text) {
    notes.push_back(text);
    return *this;
  }
};

struct ConditionOutcome {
  ConditionId id;
  ConditionStatus status = ConditionStatus::NotApplicable;
  Evidence evidence;
};

struct AnalyzeOptions {
  double tol = 1e-8;              // decision tolerance
  double membership_tol = 1e-9;   // additive tolerance on membership margins
  double strict_margin = 1e-7;    // strict-interior margin
  std::optional<double> gap_tol;  // absolute eigenvalue grouping tolerance; relative default
  std::uint64_t seed = 42;

  int opt_starts = 64;
  double stationarity_tol = 1e-9;
  long w_samples = 4000;
  long copositivity_samples = 2000;
  long z_pairs = 500;
  int intersection_budget = 64;

  long oracle_samples = 20000;
  int oracle_grid = 33;
  long pairwise_pairs = 20000;
  int sublevel_levels = 8;
  long sublevel_pairs = 300;

  bool attach_oracle = false;  // cross-validate even when a condition decides
  std::vector<std::string> condition_filter;  // names to run; empty = all
};

/// alpha = min <v1,y>^2 and eta = max (|<v3,y>|^2+..+|<vn,y>|^2)/<v1,y>^2
/// over y in K n S^{n-1}. When a search stagnates, alpha is an upper bound on
/// the true minimum and eta a lower bound on the true maximum; the flags
/// record which searches converged.
struct AlphaEta {
  double alpha = 0.0;
  double eta = 0.0;
  Eigen::VectorXd alpha_argmin;
  Eigen::VectorXd eta_argmax;
  bool alpha_converged = false;
  bool eta_converged = false;
};

struct OracleSummary {
  OracleResult geodesic;
  OracleResult pairwise;
  OracleResult sublevel;
};

struct AnalysisReport {
  Verdict verdict = Verdict::Unknown;
  std::string verdict_reason;  // deciding condition name, "CONSTANT", "ORACLE_GEODESIC", or "NONE"
  std::vector<ConditionOutcome> outcomes;
  SpectralDecomposition spectral;
  std::optional<OracleSummary> oracle_summary;
  std::uint64_t seed = 42;
  AnalyzeOptions options;
  std::vector<std::string> notes;
  double elapsed_seconds = 0.0;  // human summary only, never serialized
};

/// NEC_MULT_ONE, NEC_LAMBDA2_SPLIT and NEC_Z_PROPERTY in that order. A Fails
/// status always carries exactly re-verifiable evidence.
std::vector<ConditionOutcome> necessary_conditions(const SymmetricMatrix& a,
                                                   const SpectralDecomposition& dec,
                                                   const ConeSpec& k, const AnalyzeOptions& opts);

ConditionOutcome sufficient_two_eig(const SpectralDecomposition& dec, const ConeSpec& k,
                                    const AnalyzeOptions& opts);

/// use_w_dual enables the expensive W*-membership branch; without it the
/// condition only certifies through exact dual-cone membership of v^1.
ConditionOutcome sufficient_best_iii(const SymmetricMatrix& a, const SpectralDecomposition& dec,
                                     const ConeSpec& k, const AnalyzeOptions& opts,
                                     bool use_w_dual);

ConditionOutcome sufficient_countergg(const SpectralDecomposition& dec, const ConeSpec& k,
                                      const AnalyzeOptions& opts);

/// Throws std::domain_error when v^1 is not interior to K* (alpha could be 0)
/// or n < 3.
AlphaEta compute_alpha_eta(const SpectralDecomposition& dec, const ConeSpec& k,
                           const AnalyzeOptions& opts);

ConditionOutcome sufficient_alpha_eta(const SpectralDecomposition& dec, const ConeSpec& k,
                                      const AnalyzeOptions& opts);

ConditionOutcome sufficient_conv_sl(const SymmetricMatrix& a, const SpectralDecomposition& dec,
                                    const ConeSpec& k, const AnalyzeOptions& opts);

ConditionOutcome characterize_selfdual(const SymmetricMatrix& a, const SpectralDecomposition& dec,
                                       const ConeSpec& k, const AnalyzeOptions& opts);

ConditionOutcome characterize_lorentz_2eig(const SymmetricMatrix& a,
                                           const SpectralDecomposition& dec,
                                           const AnalyzeOptions& opts);

/// Runs the three samplers with the option budgets.
OracleSummary run_oracles(const SymmetricMatrix& a, const ConeSpec& k, const AnalyzeOptions& opts);

/// Full decision pipeline: characterizations, then necessary conditions, then
/// sufficient conditions from cheapest to most expensive, then the geodesic
/// oracle as refuter of last resort. Short-circuits at the first decisive
/// outcome; everything is reproducible from (A, K, opts).
AnalysisReport analyze(const SymmetricMatrix& a, const ConeSpec& k, const AnalyzeOptions& opts);

}  // namespace sqc
