#include "sqc/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sqc/optim.hpp"

namespace sqc {

const char* to_string(ConditionId id) {
  switch (id) {
    case ConditionId::NecMultOne: return "NEC_MULT_ONE";
    case ConditionId::NecLambda2Split: return "NEC_LAMBDA2_SPLIT";
    case ConditionId::NecZProperty: return "NEC_Z_PROPERTY";
    case ConditionId::SufTwoEig: return "SUF_TWO_EIG";
    case ConditionId::SufBestIii: return "SUF_BEST_III";
    case ConditionId::SufCountergg: return "SUF_COUNTERGG";
    case ConditionId::SufAlphaEta: return "SUF_ALPHA_ETA";
    case ConditionId::SufConvSl: return "SUF_CONV_SL";
    case ConditionId::CharSelfdualIv: return "CHAR_SELFDUAL_IV";
    case ConditionId::CharLorentz2Eig: return "CHAR_LORENTZ_2EIG";
  }
  return "UNKNOWN_CONDITION";
}

const char* to_string(ConditionStatus status) {
  switch (status) {
    case ConditionStatus::Holds: return "HOLDS";
    case ConditionStatus::Fails: return "FAILS";
    case ConditionStatus::NotApplicable: return "NOT_APPLICABLE";
    case ConditionStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN_STATUS";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::CertifiedQuasiconvex: return "CERTIFIED_QUASICONVEX";
    case Verdict::CertifiedNot: return "CERTIFIED_NOT";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

bool two_eig_pattern(const SpectralDecomposition& dec) {
  const double gap = dec.gap_tolerance;
  return dec.multiplicity_of_smallest == 1 &&
         dec.lambda_max() - dec.lambda(1) <= gap && dec.lambda(1) - dec.lambda(0) > gap;
}

// lambda_1 < lambda_2 = ... = lambda_{n-1} (<= lambda_n), the shape needed by
// SUF_COUNTERGG; the top eigenvalue may coincide with the middle block, in
// which case the coupling coefficient degenerates to zero.
bool countergg_pattern(const SpectralDecomposition& dec) {
  const int n = dec.n();
  if (n < 3) return false;
  const double gap = dec.gap_tolerance;
  if (dec.multiplicity_of_smallest != 1) return false;
  return dec.lambda(n - 2) - dec.lambda(1) <= gap;
}

/// Dual-interior test: margin(v) >= m for self-dual cones, optimization with
/// a raised bar for elliptic ones (dual_contains with negative tolerance).
Ternary dual_interior(const ConeSpec& k, const Eigen::VectorXd& v, double interior_margin,
                      std::uint64_t seed) {
  if (k.self_dual()) {
    return strictly_contains(k, v, interior_margin) ? Ternary::Yes : Ternary::No;
  }
  DualOptions opts;
  opts.tol = -interior_margin;
  opts.seed = seed;
  return dual_contains(k, v, opts);
}

struct CopositivityCheck {
  Ternary status = Ternary::Inconclusive;
  CopositivityCertificate certificate;
};

/// K-copositivity of B: exact for the Lorentz cone via the S-lemma; PSD
/// shortcut or sampled refutation elsewhere.
CopositivityCheck check_copositive(const SymmetricMatrix& b, const ConeSpec& k,
                                   const AnalyzeOptions& opts) {
  CopositivityCheck out;
  if (k.kind() == ConeKind::Lorentz && !k.is_negated()) {
    out.certificate = lorentz_copositive(b, opts.tol);
  } else {
    out.certificate = sampled_copositive(b, k, opts.copositivity_samples, opts.seed, opts.tol);
  }
  switch (out.certificate.status) {
    case CopositivityStatus::Copositive: out.status = Ternary::Yes; break;
    case CopositivityStatus::NotCopositive: out.status = Ternary::No; break;
    case CopositivityStatus::Inconclusive: out.status = Ternary::Inconclusive; break;
  }
  return out;
}

SymmetricMatrix lambda2_shift(const SymmetricMatrix& a, const SpectralDecomposition& dec) {
  const int n = a.n();
  const double lambda2 = dec.lambda(1);
  return SymmetricMatrix(lambda2 * Eigen::MatrixXd::Identity(n, n) - a.matrix());
}

void record_copositivity(Evidence& ev, const CopositivityCheck& chk) {
  ev.num("copositivity_floor", chk.certificate.psd_floor);
  if (chk.certificate.rho) ev.num("rho", *chk.certificate.rho);
  if (chk.certificate.witness) ev.vec("copositivity_witness", *chk.certificate.witness);
}

}  // namespace

std::vector<ConditionOutcome> necessary_conditions(const SymmetricMatrix& a,
                                                   const SpectralDecomposition& dec,
                                                   const ConeSpec& k,
                                                   const AnalyzeOptions& opts) {
  std::vector<ConditionOutcome> out;
  const int n = dec.n();

  {  // NEC_MULT_ONE
    ConditionOutcome c{ConditionId::NecMultOne, ConditionStatus::NotApplicable, {}};
    if (dec.single_eigenvalue()) {
      c.evidence.note("q_A constant on the sphere: condition vacuous");
    } else {
      c.evidence.num("multiplicity_of_smallest", dec.multiplicity_of_smallest);
      c.evidence.num("lambda_gap", dec.lambda(1) - dec.lambda(0));
      c.status = (dec.multiplicity_of_smallest == 1) ? ConditionStatus::Holds
                                                     : ConditionStatus::Fails;
    }
    out.push_back(std::move(c));
  }

  {  // NEC_LAMBDA2_SPLIT: lambda_2 must not sit strictly inside the cap range.
    ConditionOutcome c{ConditionId::NecLambda2Split, ConditionStatus::NotApplicable, {}};
    if (n >= 3 && !dec.single_eigenvalue()) {
      optim::CapSettings settings;
      settings.stationarity_tol = opts.stationarity_tol;
      settings.max_iter = 800;
      const optim::CapRange range =
          optim::quadratic_cap_range(a, k, opts.opt_starts, opts.seed, settings);
      const double lambda2 = dec.lambda(1);
      c.evidence.num("lambda_2", lambda2);
      c.evidence.num("cap_min_estimate", range.min_value);
      c.evidence.num("cap_max_estimate", range.max_value);
      c.evidence.vec("cap_argmin", range.argmin);
      c.evidence.vec("cap_argmax", range.argmax);
      if (lambda2 <= range.min_value + opts.tol || range.max_value <= lambda2 + opts.tol) {
        c.status = ConditionStatus::Holds;
      } else if (lambda2 > range.min_value + 10.0 * opts.tol &&
                 lambda2 < range.max_value - 10.0 * opts.tol &&
                 contains(k, range.argmin, opts.membership_tol) &&
                 contains(k, range.argmax, opts.membership_tol)) {
        // The witnesses certify min < lambda_2 < max regardless of optimizer
        // quality: the searched min only overestimates, the max underestimates.
        c.status = ConditionStatus::Fails;
      } else {
        c.status = ConditionStatus::Inconclusive;
        c.evidence.note("optimizer margin below decision resolution");
      }
    } else if (n < 3) {
      c.evidence.note("requires n >= 3");
    }
    out.push_back(std::move(c));
  }

  {  // NEC_Z_PROPERTY (self-dual cones only)
    ConditionOutcome c{ConditionId::NecZProperty, ConditionStatus::NotApplicable, {}};
    if (k.self_dual() && !k.is_negated() && !dec.single_eigenvalue()) {
      const ZPropertyResult z = z_property_sampled(a, k, opts.z_pairs, opts.seed, opts.tol);
      c.evidence.num("worst_pair_value", z.worst);
      if (z.status == ZPropertyStatus::Violated) {
        c.status = ConditionStatus::Fails;
        c.evidence.vec("pair_x", z.witness_pair->first);
        c.evidence.vec("pair_y", z.witness_pair->second);
      } else {
        c.status = ConditionStatus::Holds;
        c.evidence.note("sampled consistency; not a certificate");
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

ConditionOutcome sufficient_two_eig(const SpectralDecomposition& dec, const ConeSpec& k,
                                    const AnalyzeOptions& opts) {
  ConditionOutcome c{ConditionId::SufTwoEig, ConditionStatus::NotApplicable, {}};
  if (dec.n() < 3 || !two_eig_pattern(dec)) return c;
  bool inconclusive = false;
  for (double sign : {1.0, -1.0}) {
    const Eigen::VectorXd v1 = sign * dec.v(0);
    const Ternary member = dual_contains(k, v1, opts.membership_tol);
    if (member == Ternary::Yes) {
      c.status = ConditionStatus::Holds;
      c.evidence.num("sign", sign);
      c.evidence.vec("v1", v1);
      return c;
    }
    if (member == Ternary::Inconclusive) inconclusive = true;
  }
  c.status = inconclusive ? ConditionStatus::Inconclusive : ConditionStatus::Fails;
  c.evidence.note("neither sign of v1 lies in the dual cone");
  return c;
}

ConditionOutcome sufficient_best_iii(const SymmetricMatrix& a, const SpectralDecomposition& dec,
                                     const ConeSpec& k, const AnalyzeOptions& opts,
                                     bool use_w_dual) {
  ConditionOutcome c{ConditionId::SufBestIii, ConditionStatus::NotApplicable, {}};
  if (dec.n() < 3 || dec.single_eigenvalue()) return c;
  if (dec.multiplicity_of_smallest != 1) {
    c.evidence.note("requires a simple smallest eigenvalue");
    return c;
  }
  const CopositivityCheck copos = check_copositive(lambda2_shift(a, dec), k, opts);
  record_copositivity(c.evidence, copos);
  if (copos.status == Ternary::No) {
    c.status = ConditionStatus::Fails;
    c.evidence.note("lambda_2 I - A is not K-copositive");
    return c;
  }
  if (copos.status == Ternary::Inconclusive) {
    c.status = ConditionStatus::Inconclusive;
    c.evidence.note("copositivity of lambda_2 I - A not certified");
    return c;
  }
  // Hypotheses hold; try exact dual membership of either sign of v^1.
  bool membership_inconclusive = false;
  for (double sign : {1.0, -1.0}) {
    const Eigen::VectorXd v1 = sign * dec.v(0);
    const Ternary member = dual_contains(k, v1, opts.membership_tol);
    if (member == Ternary::Yes) {
      c.status = ConditionStatus::Holds;
      c.evidence.num("sign", sign);
      c.evidence.note("v1 in K*");
      return c;
    }
    if (member == Ternary::Inconclusive) membership_inconclusive = true;
  }
  if (!use_w_dual) {
    c.status = ConditionStatus::Inconclusive;
    c.evidence.note("v1 not in K*; W* branch not evaluated");
    return c;
  }
  // W* branch: v^1 in W* u -W* decides the characterization under the
  // verified hypotheses.
  const WConeSpec w = WConeSpec::make(dec, k);
  int refuted = 0;
  for (double sign : {1.0, -1.0}) {
    const WDualOutcome wd =
        w_dual_contains(w, sign * dec.v(0), opts.w_samples, opts.tol, opts.seed);
    c.evidence.num(sign > 0 ? "w_dual_min_plus" : "w_dual_min_minus", wd.min_value);
    if (wd.status == Ternary::Yes) {
      c.status = ConditionStatus::Holds;
      c.evidence.num("sign", sign);
      c.evidence.note("v1 in W* (sampled minimum nonnegative, search converged)");
      return c;
    }
    if (wd.status == Ternary::No) {
      ++refuted;
      c.evidence.vec(sign > 0 ? "w_witness_plus" : "w_witness_minus", *wd.witness);
    }
  }
  if (refuted == 2 && !membership_inconclusive) {
    c.status = ConditionStatus::Fails;
    c.evidence.note("v1 outside W* u -W* with verified witnesses");
  } else {
    c.status = ConditionStatus::Inconclusive;
  }
  return c;
}

ConditionOutcome sufficient_countergg(const SpectralDecomposition& dec, const ConeSpec& k,
                                      const AnalyzeOptions& opts) {
  ConditionOutcome c{ConditionId::SufCountergg, ConditionStatus::NotApplicable, {}};
  if (dec.n() < 3 || !countergg_pattern(dec)) return c;
  if (k.kind() == ConeKind::Elliptic) {
    c.evidence.note("no closed-form Moreau decomposition for elliptic cones");
    return c;
  }
  const int n = dec.n();
  const double lambda = dec.lambda(0);
  const double mu = dec.lambda(1);
  const double eta = dec.lambda(n - 1);
  const double coeff = (eta - mu <= dec.gap_tolerance)
                           ? 0.0
                           : std::sqrt((eta - mu) / (mu - lambda));
  c.evidence.num("coefficient", coeff);
  bool inconclusive = false;
  for (double sn : {1.0, -1.0}) {
    const Eigen::VectorXd abs_vn = moreau_decompose(k, Eigen::VectorXd(sn * dec.v(n - 1))).abs;
    for (double s1 : {1.0, -1.0}) {
      const Eigen::VectorXd u = s1 * dec.v(0) - coeff * abs_vn;
      const Ternary member = dual_contains(k, u, opts.membership_tol);
      if (member == Ternary::Yes) {
        c.status = ConditionStatus::Holds;
        c.evidence.vec("inclusion_vector", u);
        c.evidence.num("sign_v1", s1);
        c.evidence.num("sign_vn", sn);
        return c;
      }
      if (member == Ternary::Inconclusive) inconclusive = true;
    }
  }
  c.status = inconclusive ? ConditionStatus::Inconclusive : ConditionStatus::Fails;
  c.evidence.note("inclusion vector outside K* for all sign choices");
  return c;
}

AlphaEta compute_alpha_eta(const SpectralDecomposition& dec, const ConeSpec& k,
                           const AnalyzeOptions& opts) {
  const int n = dec.n();
  if (n < 3) throw std::domain_error("compute_alpha_eta: requires n >= 3");
  // v^1 must be interior to K*; otherwise alpha can vanish. Either sign is
  // acceptable since both objectives are sign-invariant.
  Eigen::VectorXd v1 = dec.v(0);
  Ternary interior = dual_interior(k, v1, opts.strict_margin, opts.seed);
  if (interior != Ternary::Yes) {
    const Ternary other = dual_interior(k, Eigen::VectorXd(-v1), opts.strict_margin, opts.seed);
    if (other != Ternary::Yes) {
      throw std::domain_error("compute_alpha_eta: v1 is not interior to K*");
    }
    v1 = -v1;
  }

  optim::CapSettings settings;
  settings.stationarity_tol = 1e-8;
  settings.max_iter = 2000;
  std::vector<Eigen::VectorXd> starts;
  Rng rng(opts.seed);
  starts.push_back(v1);
  for (int i = 1; i < opts.opt_starts; ++i) {
    starts.push_back(i % 3 == 0 ? sample_cap_near_boundary(k, rng, 0.05)
                                : sample_cap(k, rng, 1e-9));
  }

  AlphaEta result;
  {  // alpha = min <v1, y>^2
    optim::Objective f = [&v1](const Eigen::VectorXd& y) {
      const double d = v1.dot(y);
      return d * d;
    };
    optim::Gradient g = [&v1](const Eigen::VectorXd& y) {
      return Eigen::VectorXd(2.0 * v1.dot(y) * v1);
    };
    optim::CapResult best = optim::multistart_descend(f, g, optim::cone_feasibility(k, 1e-12),
                                                      optim::cone_retraction(k), starts, settings);
    result.alpha = best.value;
    result.alpha_argmin = best.x;
    result.alpha_converged = best.converged;
  }
  {  // eta = max sum_{i>=3} <v^i, y>^2 / <v^1, y>^2
    Eigen::MatrixXd tail = dec.eigenvectors.rightCols(n - 2);  // v^3 .. v^n
    optim::Objective f = [&](const Eigen::VectorXd& y) {
      const double den = std::pow(v1.dot(y), 2);
      const double num = (tail.transpose() * y).squaredNorm();
      return -num / den;
    };
    optim::Gradient g = [&](const Eigen::VectorXd& y) {
      const double d1 = v1.dot(y);
      const double den = d1 * d1;
      const Eigen::VectorXd ty = tail.transpose() * y;
      const double num = ty.squaredNorm();
      const Eigen::VectorXd dnum = 2.0 * (tail * ty);
      const Eigen::VectorXd dden = 2.0 * d1 * v1;
      return Eigen::VectorXd(-(dnum * den - num * dden) / (den * den));
    };
    optim::CapResult best = optim::multistart_descend(f, g, optim::cone_feasibility(k, 1e-12),
                                                      optim::cone_retraction(k), starts, settings);
    result.eta = -best.value;
    result.eta_argmax = best.x;
    result.eta_converged = best.converged;
  }
  return result;
}

ConditionOutcome sufficient_alpha_eta(const SpectralDecomposition& dec, const ConeSpec& k,
                                      const AnalyzeOptions& opts) {
  ConditionOutcome c{ConditionId::SufAlphaEta, ConditionStatus::NotApplicable, {}};
  if (dec.n() < 3 || dec.single_eigenvalue() || dec.multiplicity_of_smallest != 1) return c;
  AlphaEta ae;
  try {
    ae = compute_alpha_eta(dec, k, opts);
  } catch (const std::domain_error& err) {
    c.evidence.note(err.what());
    return c;
  }
  const double delta = std::max(ae.alpha, 1.0 / std::max(ae.eta, 1e-300));
  const double bound = dec.lambda(1) + delta * (dec.lambda(1) - dec.lambda(0));
  c.evidence.num("alpha", ae.alpha);
  c.evidence.num("eta", ae.eta);
  c.evidence.num("delta", delta);
  c.evidence.num("bound", bound);
  c.evidence.vec("alpha_argmin", ae.alpha_argmin);
  c.evidence.vec("eta_argmax", ae.eta_argmax);
  if (!ae.alpha_converged || !ae.eta_converged) {
    c.evidence.note("estimates did not converge: alpha upper-bounds the true min, "
                    "eta lower-bounds the true max");
  }
  if (dec.lambda_max() <= bound + opts.tol) {
    c.status = (ae.alpha_converged && ae.eta_converged) ? ConditionStatus::Holds
                                                        : ConditionStatus::Inconclusive;
  } else {
    c.status = ConditionStatus::Fails;
  }
  return c;
}

ConditionOutcome sufficient_conv_sl(const SymmetricMatrix& a, const SpectralDecomposition& dec,
                                    const ConeSpec& k, const AnalyzeOptions& opts) {
  ConditionOutcome c{ConditionId::SufConvSl, ConditionStatus::NotApplicable, {}};
  const int n = dec.n();
  if (n < 3 || dec.single_eigenvalue() || dec.multiplicity_of_smallest != 1) return c;
  const double lambda1 = dec.lambda(0);
  const double lambda2 = dec.lambda(1);
  const double lambda3 = dec.lambda(2);
  c.evidence.num("midpoint_bound", 0.5 * (lambda1 + lambda3));
  if (lambda2 > 0.5 * (lambda1 + lambda3) + opts.tol) {
    c.status = ConditionStatus::Fails;
    c.evidence.note("lambda_2 > (lambda_1 + lambda_3)/2");
    return c;
  }
  const CopositivityCheck copos = check_copositive(lambda2_shift(a, dec), k, opts);
  record_copositivity(c.evidence, copos);
  if (copos.status == Ternary::No) {
    c.status = ConditionStatus::Fails;
    c.evidence.note("lambda_2 I - A is not K-copositive");
    return c;
  }
  if (copos.status == Ternary::Inconclusive) {
    c.status = ConditionStatus::Inconclusive;
    return c;
  }
  const ConeSpec level = elliptic_levelcone(dec, lambda2);
  bool any_inconclusive = false;
  for (bool negate : {true, false}) {
    const ConeSpec other = negate ? level.negated() : level;
    const IntersectionResult isect =
        intersection_trivial(k, other, opts.intersection_budget, opts.tol, opts.seed);
    const char* tag = negate ? "joint_margin_minus" : "joint_margin_plus";
    c.evidence.num(tag, isect.best_joint_margin);
    if (isect.status == IntersectionStatus::Trivial) {
      c.status = ConditionStatus::Holds;
      c.evidence.note(negate ? "K n -L_{lambda_2} = {0}" : "K n L_{lambda_2} = {0}");
      return c;
    }
    if (isect.status == IntersectionStatus::Inconclusive) any_inconclusive = true;
    if (isect.witness) {
      c.evidence.vec(negate ? "common_direction_minus" : "common_direction_plus",
                     *isect.witness);
    }
  }
  c.status = any_inconclusive ? ConditionStatus::Inconclusive : ConditionStatus::Fails;
  if (c.status == ConditionStatus::Fails) {
    c.evidence.note("both signed level cones meet K nontrivially");
  }
  return c;
}

ConditionOutcome characterize_selfdual(const SymmetricMatrix& a, const SpectralDecomposition& dec,
                                       const ConeSpec& k, const AnalyzeOptions& opts) {
  ConditionOutcome c{ConditionId::CharSelfdualIv, ConditionStatus::NotApplicable, {}};
  if (!k.self_dual() || k.is_negated() || dec.n() < 3 || dec.single_eigenvalue()) return c;
  // Hypothesis: some eigenvector of the smallest eigenvalue lies in K.
  bool hypothesis = false;
  Eigen::VectorXd member;
  for (int i = 0; i < dec.multiplicity_of_smallest && !hypothesis; ++i) {
    for (double sign : {1.0, -1.0}) {
      const Eigen::VectorXd v = sign * dec.v(i);
      if (contains(k, v, opts.membership_tol)) {
        hypothesis = true;
        member = v;
        break;
      }
    }
  }
  if (!hypothesis) {
    c.evidence.note("no eigenvector of lambda_1 found in K");
    return c;
  }
  c.evidence.vec("v1_in_K", member);
  if (dec.multiplicity_of_smallest > 1) {
    c.status = ConditionStatus::Fails;
    c.evidence.num("multiplicity_of_smallest", dec.multiplicity_of_smallest);
    c.evidence.note("smallest eigenvalue is not simple");
    return c;
  }
  const CopositivityCheck copos = check_copositive(lambda2_shift(a, dec), k, opts);
  record_copositivity(c.evidence, copos);
  switch (copos.status) {
    case Ternary::Yes: c.status = ConditionStatus::Holds; break;
    case Ternary::No: c.status = ConditionStatus::Fails; break;
    case Ternary::Inconclusive: c.status = ConditionStatus::Inconclusive; break;
  }
  return c;
}

ConditionOutcome characterize_lorentz_2eig(const SymmetricMatrix& a,
                                           const SpectralDecomposition& dec,
                                           const AnalyzeOptions& opts) {
  (void)a;
  ConditionOutcome c{ConditionId::CharLorentz2Eig, ConditionStatus::NotApplicable, {}};
  if (dec.n() < 3 || !two_eig_pattern(dec)) return c;
  const ConeSpec lorentz = ConeSpec::lorentz(dec.n());
  for (double sign : {1.0, -1.0}) {
    const Eigen::VectorXd v1 = sign * dec.v(0);
    if (contains(lorentz, v1, opts.membership_tol)) {
      c.status = ConditionStatus::Holds;
      c.evidence.num("sign", sign);
      c.evidence.num("lorentz_margin", margin(lorentz, v1));
      return c;
    }
  }
  c.status = ConditionStatus::Fails;
  c.evidence.num("lorentz_margin_plus", margin(lorentz, dec.v(0)));
  c.evidence.num("lorentz_margin_minus", margin(lorentz, Eigen::VectorXd(-dec.v(0))));
  c.evidence.note("neither sign of v1 lies in the Lorentz cone");
  return c;
}

OracleSummary run_oracles(const SymmetricMatrix& a, const ConeSpec& k,
                          const AnalyzeOptions& opts) {
  OracleSummary summary;
  summary.geodesic = geodesic_quasiconvexity_test(a, k, opts.oracle_samples, opts.oracle_grid,
                                                  opts.seed, opts.tol);
  summary.pairwise = pairwise_test(a, k, opts.pairwise_pairs, opts.seed + 1, opts.tol);
  summary.sublevel = sublevel_convexity_test(a, k, opts.sublevel_levels, opts.sublevel_pairs,
                                             opts.seed + 2, opts.tol);
  return summary;
}

namespace {

bool condition_enabled(const AnalyzeOptions& opts, ConditionId id) {
  if (opts.condition_filter.empty()) return true;
  const std::string name = to_string(id);
  return std::find(opts.condition_filter.begin(), opts.condition_filter.end(), name) !=
         opts.condition_filter.end();
}

}  // namespace

AnalysisReport analyze(const SymmetricMatrix& a, const ConeSpec& k, const AnalyzeOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.n() != k.n()) throw std::invalid_argument("analyze: matrix/cone dimensions differ");
  if (k.is_negated()) throw std::invalid_argument("analyze: expected a base (non-negated) cone");

  AnalysisReport report;
  report.seed = opts.seed;
  report.options = opts;
  report.verdict = Verdict::Unknown;
  report.verdict_reason = "NONE";

  const double gap_tol = opts.gap_tol.value_or(-1.0);
  report.spectral = gap_tol > 0.0 ? spectral_decompose(a, gap_tol) : spectral_decompose(a);
  const SpectralDecomposition& dec = report.spectral;

  for (int i = 0; i < dec.n(); ++i) {
    if (std::abs(dec.lambda(i)) <= dec.gap_tolerance) {
      report.notes.push_back("A is singular within the grouping tolerance; "
                             "no condition here requires nonsingularity");
      break;
    }
  }

  auto decide = [&](Verdict v, const ConditionOutcome& c) {
    report.verdict = v;
    report.verdict_reason = to_string(c.id);
  };

  if (dec.single_eigenvalue()) {
    ConditionOutcome c{ConditionId::NecMultOne, ConditionStatus::NotApplicable, {}};
    c.evidence.note("q_A constant on the sphere: quasi-convex by definition");
    report.outcomes.push_back(c);
    report.verdict = Verdict::CertifiedQuasiconvex;
    report.verdict_reason = "CONSTANT";
  }

  // Characterizations decide in both directions and run first.
  if (report.verdict == Verdict::Unknown && k.kind() == ConeKind::Lorentz &&
      condition_enabled(opts, ConditionId::CharLorentz2Eig)) {
    ConditionOutcome c = characterize_lorentz_2eig(a, dec, opts);
    if (c.status != ConditionStatus::NotApplicable) report.outcomes.push_back(c);
    if (c.status == ConditionStatus::Holds) decide(Verdict::CertifiedQuasiconvex, c);
    if (c.status == ConditionStatus::Fails) decide(Verdict::CertifiedNot, c);
  }
  if (report.verdict == Verdict::Unknown && condition_enabled(opts, ConditionId::CharSelfdualIv)) {
    ConditionOutcome c = characterize_selfdual(a, dec, k, opts);
    if (c.status != ConditionStatus::NotApplicable) report.outcomes.push_back(c);
    if (c.status == ConditionStatus::Holds) decide(Verdict::CertifiedQuasiconvex, c);
    if (c.status == ConditionStatus::Fails) decide(Verdict::CertifiedNot, c);
  }

  // Necessary conditions: any exact failure refutes.
  if (report.verdict == Verdict::Unknown) {
    for (ConditionOutcome& c : necessary_conditions(a, dec, k, opts)) {
      if (!condition_enabled(opts, c.id)) continue;
      report.outcomes.push_back(c);
      if (c.status == ConditionStatus::Fails) {
        decide(Verdict::CertifiedNot, c);
        break;
      }
    }
  }

  // Sufficient conditions from cheapest to most expensive; the W* branch of
  // SUF_BEST_III is deferred to the very end.
  if (report.verdict == Verdict::Unknown) {
    std::optional<std::size_t> best_iii_slot;
    auto try_sufficient = [&](ConditionOutcome c) {
      if (c.id == ConditionId::SufBestIii) {
        if (best_iii_slot) {
          report.outcomes[*best_iii_slot] = c;
        } else if (c.status != ConditionStatus::NotApplicable) {
          best_iii_slot = report.outcomes.size();
          report.outcomes.push_back(c);
        }
      } else if (c.status != ConditionStatus::NotApplicable) {
        report.outcomes.push_back(c);
      }
      if (c.status == ConditionStatus::Holds) decide(Verdict::CertifiedQuasiconvex, c);
    };

    if (condition_enabled(opts, ConditionId::SufTwoEig)) {
      try_sufficient(sufficient_two_eig(dec, k, opts));
    }
    if (report.verdict == Verdict::Unknown && condition_enabled(opts, ConditionId::SufBestIii)) {
      try_sufficient(sufficient_best_iii(a, dec, k, opts, /*use_w_dual=*/false));
    }
    if (report.verdict == Verdict::Unknown && condition_enabled(opts, ConditionId::SufCountergg)) {
      try_sufficient(sufficient_countergg(dec, k, opts));
    }
    if (report.verdict == Verdict::Unknown && condition_enabled(opts, ConditionId::SufAlphaEta)) {
      try_sufficient(sufficient_alpha_eta(dec, k, opts));
    }
    if (report.verdict == Verdict::Unknown && condition_enabled(opts, ConditionId::SufConvSl)) {
      try_sufficient(sufficient_conv_sl(a, dec, k, opts));
    }
    if (report.verdict == Verdict::Unknown && condition_enabled(opts, ConditionId::SufBestIii) &&
        best_iii_slot && report.outcomes[*best_iii_slot].status == ConditionStatus::Inconclusive) {
      try_sufficient(sufficient_best_iii(a, dec, k, opts, /*use_w_dual=*/true));
    }
  }

  // Oracle: refuter of last resort, and cross-validation when requested.
  const bool want_oracle = report.verdict == Verdict::Unknown || opts.attach_oracle;
  if (want_oracle) {
    OracleSummary summary = run_oracles(a, k, opts);
    if (report.verdict == Verdict::Unknown && summary.geodesic.violated) {
      const double recomputed =
          reverify_counterexample(a, k, *summary.geodesic.counterexample);
      if (recomputed > opts.tol) {
        report.verdict = Verdict::CertifiedNot;
        report.verdict_reason = "ORACLE_GEODESIC";
      }
    }
    if (report.verdict == Verdict::CertifiedQuasiconvex && summary.geodesic.violated) {
      report.notes.push_back("INTERNAL INCONSISTENCY: certified quasi-convex but the "
                             "geodesic oracle found a violation");
    }
    report.oracle_summary = std::move(summary);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace sqc
