#include "sqc/cones.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqc/optim.hpp"

namespace sqc {

namespace {

constexpr double kOrthonormalTol = 1e-10;

void check_dim(const ConeSpec& k, const Eigen::VectorXd& x, const char* where) {
  if (x.size() != k.n()) {
    std::ostringstream msg;
    msg << where << ": vector dimension " << x.size() << " != cone dimension " << k.n();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ConeSpec ConeSpec::orthant(int n) {
  if (n < 2) throw std::invalid_argument("ConeSpec::orthant: n must be >= 2");
  ConeSpec k;
  k.kind_ = ConeKind::Orthant;
  k.n_ = n;
  return k;
}

ConeSpec ConeSpec::lorentz(int n) {
  if (n < 2) throw std::invalid_argument("ConeSpec::lorentz: n must be >= 2");
  ConeSpec k;
  k.kind_ = ConeKind::Lorentz;
  k.n_ = n;
  return k;
}

ConeSpec ConeSpec::elliptic(const Eigen::VectorXd& axis, const Eigen::MatrixXd& basis,
                            const Eigen::VectorXd& weights) {
  const int n = static_cast<int>(axis.size());
  if (n < 2) throw std::invalid_argument("ConeSpec::elliptic: n must be >= 2");
  if (basis.rows() != n || basis.cols() != n - 1) {
    throw std::invalid_argument("ConeSpec::elliptic: basis must be n x (n-1)");
  }
  if (weights.size() != n - 1) {
    throw std::invalid_argument("ConeSpec::elliptic: needs n-1 weights");
  }
  Eigen::MatrixXd frame(n, n);
  frame.col(0) = axis;
  frame.rightCols(n - 1) = basis;
  Eigen::MatrixXd gram = frame.transpose() * frame - Eigen::MatrixXd::Identity(n, n);
  if (gram.cwiseAbs().maxCoeff() > kOrthonormalTol) {
    throw std::invalid_argument("ConeSpec::elliptic: {axis, basis} must be orthonormal");
  }
  if ((weights.array() < 0.0).any()) {
    throw std::invalid_argument("ConeSpec::elliptic: weights must be >= 0");
  }
  ConeSpec k;
  k.kind_ = ConeKind::Elliptic;
  k.n_ = n;
  k.axis_ = axis;
  k.basis_ = basis;
  k.weights_ = weights;
  k.degenerate_ = (weights.array() == 0.0).any();
  return k;
}

ConeSpec ConeSpec::negated() const {
  ConeSpec k = *this;
  k.negated_ = !k.negated_;
  return k;
}

std::string ConeSpec::describe() const {
  std::ostringstream out;
  if (negated_) out << "-";
  switch (kind_) {
    case ConeKind::Orthant: out << "orthant(" << n_ << ")"; break;
    case ConeKind::Lorentz: out << "lorentz(" << n_ << ")"; break;
    case ConeKind::Elliptic:
      out << "elliptic(" << n_ << (degenerate_ ? ", degenerate)" : ")");
      break;
  }
  return out.str();
}

double margin(const ConeSpec& k, const Eigen::VectorXd& x) {
  check_dim(k, x, "margin");
  const Eigen::VectorXd z = k.is_negated() ? Eigen::VectorXd(-x) : x;
  switch (k.kind()) {
    case ConeKind::Orthant:
      return z.minCoeff();
    case ConeKind::Lorentz:
      return z[0] - z.tail(z.size() - 1).norm();
    case ConeKind::Elliptic: {
      const Eigen::VectorXd proj = k.basis().transpose() * z;
      const double psi = std::sqrt(std::max(0.0, proj.dot(k.weights().cwiseProduct(proj))));
      return k.axis().dot(z) - psi;
    }
  }
  return 0.0;
}

bool contains(const ConeSpec& k, const Eigen::VectorXd& x, double tol) {
  return margin(k, x) >= -tol;
}

bool strictly_contains(const ConeSpec& k, const Eigen::VectorXd& x, double interior_margin) {
  return margin(k, x) >= interior_margin;
}

Eigen::VectorXd snap_into_cone(const ConeSpec& k, const Eigen::VectorXd& x) {
  check_dim(k, x, "snap_into_cone");
  const double m = margin(k, x);
  if (m >= 0.0) return x;
  if (m < -1e-8 * (1.0 + x.norm())) return x;  // genuinely outside; not repairable
  Eigen::VectorXd z = k.is_negated() ? Eigen::VectorXd(-x) : x;
  switch (k.kind()) {
    case ConeKind::Orthant:
      z = z.cwiseMax(0.0);
      break;
    case ConeKind::Lorentz:
      z[0] = z.tail(z.size() - 1).norm();
      break;
    case ConeKind::Elliptic: {
      // Raise the axis coordinate to the boundary, then bump in growing
      // epsilons until the recomputed margin clears zero.
      const ConeSpec base = k.is_negated() ? k.negated() : k;
      const double scale = 1.0 + z.norm();
      Eigen::VectorXd cand = z - margin(base, z) * k.axis();
      double eps = 1e-16 * scale;
      for (int i = 0; i < 40 && margin(base, cand) < 0.0; ++i) {
        cand += eps * k.axis();
        eps *= 4.0;
      }
      if (margin(base, cand) >= 0.0) z = cand;
      break;
    }
  }
  return k.is_negated() ? Eigen::VectorXd(-z) : z;
}

MoreauParts project_lorentz(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("project_lorentz: n must be >= 2");
  const double x1 = x[0];
  const Eigen::VectorXd x2 = x.tail(n - 1);
  const double tail_norm = x2.norm();
  MoreauParts parts;
  if (x1 >= tail_norm) {  // x in L (covers x2 = 0, x1 >= 0)
    parts.plus = x;
    parts.minus = Eigen::VectorXd::Zero(n);
    parts.abs = x;
    return parts;
  }
  if (-x1 >= tail_norm) {  // -x in L = L*
    parts.plus = Eigen::VectorXd::Zero(n);
    parts.minus = -x;
    parts.abs = -x;
    return parts;
  }
  // |x1| < |x2|: the projection lands on the boundary.
  const double cp = (x1 + tail_norm) / (2.0 * tail_norm);
  const double cm = (tail_norm - x1) / (2.0 * tail_norm);
  parts.plus = Eigen::VectorXd(n);
  parts.plus[0] = cp * tail_norm;
  parts.plus.tail(n - 1) = cp * x2;
  parts.minus = Eigen::VectorXd(n);
  parts.minus[0] = cm * tail_norm;
  parts.minus.tail(n - 1) = -cm * x2;
  parts.abs = parts.plus + parts.minus;
  return parts;
}

Eigen::VectorXd abs_lorentz(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("abs_lorentz: n must be >= 2");
  if (x.norm() == 0.0) throw std::invalid_argument("abs_lorentz: x must be nonzero");
  const double x1 = x[0];
  const Eigen::VectorXd x2 = x.tail(n - 1);
  const double tail_norm = x2.norm();
  Eigen::VectorXd abs = Eigen::VectorXd::Zero(n);
  if (tail_norm == 0.0) {  // limit case: |x|^L = (|x1|, 0)
    abs[0] = std::abs(x1);
    return abs;
  }
  const double sgn = (x1 > 0.0) ? 1.0 : (x1 < 0.0 ? -1.0 : 0.0);
  abs[0] = std::max(std::abs(x1), tail_norm);
  abs.tail(n - 1) = (std::min(std::abs(x1), tail_norm) * sgn / tail_norm) * x2;
  return abs;
}

MoreauParts moreau_decompose(const ConeSpec& k, const Eigen::VectorXd& x) {
  check_dim(k, x, "moreau_decompose");
  if (k.kind() == ConeKind::Elliptic) {
    throw UnsupportedCone("moreau_decompose: no closed form for elliptic cones");
  }
  if (k.is_negated()) {
    // P_{-K}(x) = -P_K(-x); the roles of the parts swap sign.
    MoreauParts base = moreau_decompose(k.negated(), Eigen::VectorXd(-x));
    MoreauParts parts;
    parts.plus = -base.plus;
    parts.minus = -base.minus;
    parts.abs = -base.abs;
    return parts;
  }
  if (k.kind() == ConeKind::Lorentz) return project_lorentz(x);
  MoreauParts parts;  // orthant: componentwise split
  parts.plus = x.cwiseMax(0.0);
  parts.minus = (-x).cwiseMax(0.0);
  parts.abs = parts.plus + parts.minus;
  return parts;
}

ConeSpec elliptic_levelcone(const SpectralDecomposition& dec, double c) {
  const int n = dec.n();
  if (n < 2) throw std::domain_error("elliptic_levelcone: n must be >= 2");
  const double lambda1 = dec.lambda(0);
  const double lambda2 = dec.lambda(1);
  if (!(c > lambda1)) {
    throw std::domain_error("elliptic_levelcone: need c > lambda_1");
  }
  if (c > lambda2) {
    throw std::domain_error("elliptic_levelcone: need c <= lambda_2");
  }
  Eigen::VectorXd weights(n - 1);
  for (int i = 1; i < n; ++i) {
    weights[i - 1] = std::max(0.0, (dec.lambda(i) - c) / (c - lambda1));
  }
  return ConeSpec::elliptic(dec.v(0), dec.eigenvectors.rightCols(n - 1), weights);
}

WConeSpec WConeSpec::make(const SpectralDecomposition& dec, const ConeSpec& base) {
  return make(dec, base, dec.lambda(1));
}

WConeSpec WConeSpec::make(const SpectralDecomposition& dec, const ConeSpec& base, double c) {
  if (base.n() != dec.n()) {
    throw std::invalid_argument("WConeSpec: cone and decomposition dimensions differ");
  }
  WConeSpec w{dec, base, c, elliptic_levelcone(dec, c)};
  return w;
}

bool w_contains(const WConeSpec& w, const Eigen::VectorXd& x, double membership_tol,
                double interior_margin) {
  if (!strictly_contains(w.base_cone, x, interior_margin)) return false;
  return contains(w.level_cone, x, membership_tol) ||
         contains(w.level_cone, Eigen::VectorXd(-x), membership_tol);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd sample_orthant_cap(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::abs(rng.normal()) + 1e-12;
  return v / v.norm();
}

Eigen::VectorXd sample_lorentz_cap(int n, Rng& rng, double margin_lo, double margin_hi) {
  const double r = rng.uniform();
  const double m = rng.uniform(margin_lo, margin_hi);
  Eigen::VectorXd x(n);
  x[0] = r + m;
  x.tail(n - 1) = r * rng.unit_vector(n - 1);
  return x / x.norm();
}

Eigen::VectorXd sample_elliptic_cap(const ConeSpec& k, Rng& rng, double margin_lo,
                                    double margin_hi) {
  const int n = k.n();
  const double s = rng.uniform();
  const double m = rng.uniform(margin_lo, margin_hi);
  Eigen::VectorXd coeffs(n - 1);
  // Unit direction over the positively weighted coordinates; zero-weight
  // coordinates are unconstrained and get independent normal draws.
  Eigen::VectorXd dir = rng.unit_vector(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    const double w = k.weights()[i];
    coeffs[i] = (w > 0.0) ? s * dir[i] / std::sqrt(w) : rng.normal();
  }
  Eigen::VectorXd x = (s + m) * k.axis() + k.basis() * coeffs;
  return x / x.norm();
}

}  // namespace

Eigen::VectorXd sample_cap(const ConeSpec& k, Rng& rng, double min_margin, long budget) {
  for (long attempt = 0; attempt < budget; ++attempt) {
    Eigen::VectorXd x;
    switch (k.kind()) {
      case ConeKind::Orthant: x = sample_orthant_cap(k.n(), rng); break;
      case ConeKind::Lorentz: x = sample_lorentz_cap(k.n(), rng, 0.01, 1.0); break;
      case ConeKind::Elliptic: x = sample_elliptic_cap(k, rng, 0.01, 1.0); break;
    }
    if (k.is_negated()) x = -x;
    if (margin(k, x) > min_margin) return x;
  }
  throw SamplingExhausted("sample_cap: no point with margin > " + std::to_string(min_margin) +
                          " in " + k.describe() + " after budget");
}

Eigen::VectorXd sample_cap_near_boundary(const ConeSpec& k, Rng& rng, double max_margin,
                                         long budget) {
  for (long attempt = 0; attempt < budget; ++attempt) {
    Eigen::VectorXd x;
    switch (k.kind()) {
      case ConeKind::Orthant: {
        x = sample_orthant_cap(k.n(), rng);
        x[rng.uniform_int(0, k.n() - 1)] = rng.uniform(1e-7, max_margin);
        x /= x.norm();
        break;
      }
      case ConeKind::Lorentz: x = sample_lorentz_cap(k.n(), rng, 1e-7, max_margin); break;
      case ConeKind::Elliptic: x = sample_elliptic_cap(k, rng, 1e-7, max_margin); break;
    }
    if (k.is_negated()) x = -x;
    const double m = margin(k, x);
    if (m > 0.0 && m < max_margin) return x;
  }
  throw SamplingExhausted("sample_cap_near_boundary: budget exhausted for " + k.describe());
}

// ---------------------------------------------------------------------------
// Dual membership
// ---------------------------------------------------------------------------

Ternary dual_contains(const ConeSpec& k, const Eigen::VectorXd& y, double tol) {
  DualOptions opts;
  opts.tol = tol;
  return dual_contains(k, y, opts);
}

Ternary dual_contains(const ConeSpec& k, const Eigen::VectorXd& y, const DualOptions& opts) {
  check_dim(k, y, "dual_contains");
  if (k.self_dual()) {
    // dual of -K is -(K*) = -K for self-dual K, so the flag needs no special case.
    return contains(k, y, opts.tol) ? Ternary::Yes : Ternary::No;
  }
  // Elliptic: minimize <y, x> over unit generators x of the cone.
  optim::Objective f = [&y](const Eigen::VectorXd& x) { return y.dot(x); };
  optim::Gradient g = [&y](const Eigen::VectorXd&) { return y; };
  std::vector<Eigen::VectorXd> starts;
  Rng rng(opts.seed);
  starts.push_back(k.is_negated() ? Eigen::VectorXd(-k.axis()) : k.axis());
  for (int i = 1; i < opts.starts; ++i) {
    if (i % 4 == 0) {
      starts.push_back(sample_cap_near_boundary(k, rng, 0.05));
    } else {
      starts.push_back(sample_cap(k, rng, 1e-9));
    }
  }
  optim::CapSettings settings;
  settings.max_iter = opts.max_iter;
  optim::CapResult best = optim::multistart_descend(f, g, optim::cone_feasibility(k, 1e-12),
                                                    optim::cone_retraction(k), starts, settings);
  if (best.value < -opts.tol) {
    // Exact membership of the violating generator certifies the No answer.
    const Eigen::VectorXd w = snap_into_cone(k, best.x);
    if (margin(k, w) >= 0.0 && y.dot(w) < -opts.tol) return Ternary::No;
    return Ternary::Inconclusive;
  }
  return best.converged ? Ternary::Yes : Ternary::Inconclusive;
}

// ---------------------------------------------------------------------------
// W* membership and cone intersection tests
// ---------------------------------------------------------------------------

WDualOutcome w_dual_contains(const WConeSpec& w, const Eigen::VectorXd& v, long samples,
                             double tol, std::uint64_t seed) {
  WDualOutcome out;
  if (v.size() != w.base_cone.n()) {
    throw std::invalid_argument("w_dual_contains: dimension mismatch");
  }
  constexpr double kMembershipTol = 1e-9;
  constexpr double kInteriorMargin = 1e-12;
  Rng rng(seed);
  const ConeSpec neg_level = w.level_cone.negated();

  // W = (L_c u -L_c) n int(K): draw from each branch cap and keep points
  // strictly interior to the base cone.
  std::vector<Eigen::VectorXd> accepted;
  accepted.reserve(64);
  long draws = 0;
  const long draw_budget = 40 * std::max<long>(samples, 1);
  auto try_accept = [&](const Eigen::VectorXd& x) {
    if (w_contains(w, x, kMembershipTol, kInteriorMargin)) accepted.push_back(x);
  };
  while (static_cast<long>(accepted.size()) < samples && draws < draw_budget) {
    ++draws;
    const int branch = rng.uniform_int(0, 1);
    const ConeSpec& source = (branch == 0) ? w.level_cone : neg_level;
    try {
      try_accept(sample_cap(source, rng, 1e-9, 200));
    } catch (const SamplingExhausted&) {
      // branch too thin from this stream position; keep drawing
    }
    if (draws % 3 == 0) {
      try {
        try_accept(sample_cap(w.base_cone, rng, 1e-9, 200));
      } catch (const SamplingExhausted&) {
      }
    }
  }
  if (accepted.empty()) {
    out.status = Ternary::Inconclusive;
    out.diagnostic = "empty sample of W after rejection budget";
    return out;
  }

  // Local refinement from the best starts; feasibility keeps iterates in W.
  std::sort(accepted.begin(), accepted.end(),
            [&v](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              return v.dot(a) < v.dot(b);
            });
  std::vector<Eigen::VectorXd> starts(
      accepted.begin(), accepted.begin() + std::min<std::size_t>(accepted.size(), 10));
  optim::Objective f = [&v](const Eigen::VectorXd& x) { return v.dot(x); };
  optim::Gradient g = [&v](const Eigen::VectorXd&) { return v; };
  optim::Feasible feasible = [&w](const Eigen::VectorXd& x) {
    return w_contains(w, x, kMembershipTol, kInteriorMargin);
  };
  optim::Retract retract = [](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const double nrm = z.norm();
    if (nrm < 1e-300) return Eigen::VectorXd();
    return z / nrm;
  };
  optim::CapResult best = optim::multistart_descend(f, g, feasible, retract, starts);
  out.min_value = best.value;

  if (best.value < -10.0 * tol) {
    // Re-verify by the exact inequalities before claiming No.
    auto exact = [&w](const Eigen::VectorXd& x) {
      return margin(w.base_cone, x) > 0.0 &&
             (margin(w.level_cone, x) >= 0.0 || margin(w.level_cone, Eigen::VectorXd(-x)) >= 0.0);
    };
    if (exact(best.x) && v.dot(best.x) < -10.0 * tol) {
      out.status = Ternary::No;
      out.witness = best.x;
      return out;
    }
    for (const Eigen::VectorXd& x : accepted) {
      if (v.dot(x) < -10.0 * tol && exact(x)) {
        out.status = Ternary::No;
        out.witness = x;
        out.min_value = v.dot(x);
        return out;
      }
    }
    out.status = Ternary::Inconclusive;
    out.diagnostic = "negative minimum did not re-verify exactly";
    return out;
  }
  if (best.value >= -tol && best.converged) {
    out.status = Ternary::Yes;
    return out;
  }
  out.status = Ternary::Inconclusive;
  out.diagnostic = "minimum in (-10 tol, -tol) or search did not converge";
  return out;
}

IntersectionResult intersection_trivial(const ConeSpec& k, const ConeSpec& l, int budget,
                                        double tol, std::uint64_t seed) {
  if (k.n() != l.n()) {
    throw std::invalid_argument("intersection_trivial: ambient dimensions differ");
  }
  IntersectionResult res;
  const int n = k.n();
  auto joint = [&](const Eigen::VectorXd& x) { return std::min(margin(k, x), margin(l, x)); };

  // Maximize the joint margin: descend its negation with the active cone's
  // margin gradient as a subgradient.
  optim::Objective f = [&](const Eigen::VectorXd& x) { return -joint(x); };
  optim::Gradient g = [&](const Eigen::VectorXd& x) {
    const double mk = margin(k, x);
    const double ml = margin(l, x);
    if (std::abs(mk - ml) < 1e-12) {
      return Eigen::VectorXd(-0.5 * (optim::margin_gradient(k, x) + optim::margin_gradient(l, x)));
    }
    return Eigen::VectorXd(mk < ml ? -optim::margin_gradient(k, x) : -optim::margin_gradient(l, x));
  };
  optim::Feasible all = [](const Eigen::VectorXd&) { return true; };
  optim::Retract normalize = [](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const double nrm = z.norm();
    if (nrm < 1e-300) return Eigen::VectorXd();
    return z / nrm;
  };

  Rng rng(seed);
  std::vector<Eigen::VectorXd> starts;
  auto push_cone_starts = [&](const ConeSpec& c) {
    switch (c.kind()) {
      case ConeKind::Orthant: {
        Eigen::VectorXd center = Eigen::VectorXd::Ones(n).normalized();
        starts.push_back(c.is_negated() ? Eigen::VectorXd(-center) : center);
        for (int i = 0; i < n; ++i) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
          e[i] = c.is_negated() ? -1.0 : 1.0;
          starts.push_back(e);
        }
        break;
      }
      case ConeKind::Lorentz: {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[0] = c.is_negated() ? -1.0 : 1.0;
        starts.push_back(e);
        break;
      }
      case ConeKind::Elliptic:
        starts.push_back(c.is_negated() ? Eigen::VectorXd(-c.axis()) : c.axis());
        break;
    }
    try {
      Rng local(seed ^ 0x9e3779b97f4a7c15ULL);
      for (int i = 0; i < 4; ++i) starts.push_back(sample_cap(c, local, 1e-9, 2000));
    } catch (const SamplingExhausted&) {
    }
  };
  push_cone_starts(k);
  push_cone_starts(l);
  while (static_cast<int>(starts.size()) < budget) starts.push_back(rng.unit_vector(n));

  double best_margin = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  optim::CapSettings settings;
  settings.max_iter = 300;
  for (const Eigen::VectorXd& s : starts) {
    optim::CapResult r = optim::descend(f, g, all, normalize, s, settings);
    const double jm = joint(r.x);
    if (jm > best_margin) {
      best_margin = jm;
      best_x = r.x;
    }
    if (best_margin > tol) break;  // found a clearly common direction
  }
  res.best_joint_margin = best_margin;
  if (best_x.size() > 0 && margin(k, best_x) >= 0.0 && margin(l, best_x) >= 0.0) {
    res.status = IntersectionStatus::Nontrivial;
    res.witness = best_x;
    return res;
  }
  if (best_margin <= -tol) {
    res.status = IntersectionStatus::Trivial;
    return res;
  }
  res.status = IntersectionStatus::Inconclusive;
  return res;
}

}  // namespace sqc
