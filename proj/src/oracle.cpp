#include "sqc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "sqc/rng.hpp"

namespace sqc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAntipodalGuard = 1e-6;   // theta > pi - guard is discarded
constexpr double kCoincidentGuard = 1e-8;  // theta < guard is discarded
constexpr double kInteriorMargin = 1e-9;

double clamp_unit(double c) { return std::min(1.0, std::max(-1.0, c)); }

/// q_A along the arc through (x, y) as a closed form in t; the three
/// quadratic evaluations are hoisted out of the grid scan.
struct ArcForm {
  double qa, qb, qab, theta, sin_theta;

  ArcForm(const SymmetricMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    qa = a.quad(x);
    qb = a.quad(y);
    qab = y.dot(a.apply(x));
    theta = std::acos(clamp_unit(x.dot(y)));
    sin_theta = std::sin(theta);
  }

  double value(double t) const {
    const double s1 = std::sin((1.0 - t) * theta) / sin_theta;
    const double s2 = std::sin(t * theta) / sin_theta;
    return s1 * s1 * qa + 2.0 * s1 * s2 * qab + s2 * s2 * qb;
  }

  double endpoint_max() const { return std::max(qa, qb); }
};

// Golden-section maximization of f over [lo, hi].
template <typename F>
double golden_argmax(const F& f, double lo, double hi, double width_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > width_tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd draw_cap_point(const ConeSpec& k, Rng& rng, bool near_boundary) {
  try {
    if (near_boundary) return sample_cap_near_boundary(k, rng, 0.05);
    return sample_cap(k, rng, kInteriorMargin);
  } catch (const SamplingExhausted&) {
    throw SamplingExhausted("oracle: cone " + k.describe() +
                            " is too thin for rejection sampling");
  }
}

}  // namespace

Eigen::VectorXd geodesic_point(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t) {
  if (x.size() != y.size()) throw std::invalid_argument("geodesic_point: dimension mismatch");
  const double theta = std::acos(clamp_unit(x.dot(y)));
  if (theta < kCoincidentGuard) {
    throw DegenerateGeodesic("geodesic_point: endpoints coincide");
  }
  if (theta > kPi - kAntipodalGuard) {
    throw DegenerateGeodesic("geodesic_point: endpoints are (near-)antipodal");
  }
  const double s = std::sin(theta);
  return (std::sin((1.0 - t) * theta) * x + std::sin(t * theta) * y) / s;
}

double rayleigh(const SymmetricMatrix& a, const Eigen::VectorXd& x) {
  const double nrm2 = x.squaredNorm();
  if (nrm2 == 0.0) throw std::invalid_argument("rayleigh: x must be nonzero");
  return a.quad(x) / nrm2;
}

double geodesic_violation_margin(const SymmetricMatrix& a, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, double t) {
  const Eigen::VectorXd p = geodesic_point(x, y, t);
  return a.quad(p) - std::max(a.quad(x), a.quad(y));
}

double pairwise_b_margin(const SymmetricMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  return y.dot(a.apply(x)) - x.dot(y) * std::max(a.quad(x), a.quad(y));
}

double pairwise_c_margin(const SymmetricMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  const double xy = x.dot(y);
  return y.dot(a.apply(x)) / xy - std::max(rayleigh(a, x), rayleigh(a, y));
}

double sublevel_violation_margin(const SymmetricMatrix& a, double level, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, double t) {
  const Eigen::VectorXd m = t * x + (1.0 - t) * y;
  return (a.quad(m) - level * m.squaredNorm()) / m.squaredNorm();
}

OracleResult geodesic_quasiconvexity_test(const SymmetricMatrix& a, const ConeSpec& k,
                                          long samples, int grid, std::uint64_t seed,
                                          double tol) {
  if (samples < 1) throw std::invalid_argument("geodesic test: samples must be >= 1");
  if (grid < 3) throw std::invalid_argument("geodesic test: grid must be >= 3");
  if (a.n() != k.n()) throw std::invalid_argument("geodesic test: dimension mismatch");
  OracleResult res;
  Rng rng(seed);

  for (long s = 0; s < samples; ++s) {
    const bool biased = (s % 10 == 9);  // a tenth of the pairs hug the boundary
    Eigen::VectorXd x = draw_cap_point(k, rng, biased);
    Eigen::VectorXd y = draw_cap_point(k, rng, biased);
    ++res.samples_used;
    const double theta = std::acos(clamp_unit(x.dot(y)));
    if (theta < kCoincidentGuard || theta > kPi - kAntipodalGuard) continue;

    const ArcForm arc(a, x, y);
    const double cap = arc.endpoint_max();
    double best_t = -1.0, best_v = cap;
    for (int i = 1; i <= grid; ++i) {
      const double t = static_cast<double>(i) / (grid + 1);
      const double v = arc.value(t);
      if (v > best_v) {
        best_v = v;
        best_t = t;
      }
    }
    if (best_t < 0.0) continue;
    // Local refinement of the arc maximum around the best grid cell.
    const double cell = 1.0 / (grid + 1);
    const double t_star = golden_argmax([&arc](double t) { return arc.value(t); },
                                        std::max(0.0, best_t - cell),
                                        std::min(1.0, best_t + cell), 1e-12);
    double margin = geodesic_violation_margin(a, x, y, t_star);  // exact recomputation
    if (margin <= tol) continue;

    // Shrink to the smallest sub-arc, symmetric around t*, that still
    // exhibits the violation.
    double delta = std::min(t_star, 1.0 - t_star);
    Eigen::VectorXd u = x, w = y;
    double t_rel = t_star;
    for (int it = 0; it < 40; ++it) {
      const double half = delta / 2.0;
      if (half < 1e-9) break;
      const Eigen::VectorXd u2 = geodesic_point(x, y, t_star - half);
      const Eigen::VectorXd w2 = geodesic_point(x, y, t_star + half);
      if (!(strictly_contains(k, u2, 0.0) && strictly_contains(k, w2, 0.0))) break;
      const double m2 = geodesic_violation_margin(a, u2, w2, 0.5);
      if (m2 <= tol) break;
      u = u2;
      w = w2;
      t_rel = 0.5;
      margin = m2;
      delta = half;
    }

    Counterexample ce;
    ce.kind = CounterexampleKind::Geodesic;
    ce.x = u;
    ce.y = w;
    ce.t = t_rel;
    ce.margin = margin;
    res.violated = true;
    res.counterexample = ce;
    return res;
  }
  return res;
}

OracleResult pairwise_test(const SymmetricMatrix& a, const ConeSpec& k, long pairs,
                           std::uint64_t seed, double tol) {
  if (pairs < 1) throw std::invalid_argument("pairwise test: pairs must be >= 1");
  if (a.n() != k.n()) throw std::invalid_argument("pairwise test: dimension mismatch");
  OracleResult res;
  Rng rng(seed);
  for (long s = 0; s < pairs; ++s) {
    const bool biased = (s % 10 == 9);
    Eigen::VectorXd x = draw_cap_point(k, rng, biased);
    Eigen::VectorXd y = draw_cap_point(k, rng, biased);
    ++res.samples_used;
    if (s % 2 == 0) {  // (b) on the unit cap
      const double m = pairwise_b_margin(a, x, y);
      if (m > tol) {
        Counterexample ce;
        ce.kind = CounterexampleKind::Pairwise;
        ce.detail = "b";
        ce.x = x;
        ce.y = y;
        ce.margin = m;
        res.violated = true;
        res.counterexample = ce;
        return res;
      }
    } else {  // (c) on scaled cone points
      x *= rng.uniform(0.25, 4.0);
      y *= rng.uniform(0.25, 4.0);
      if (std::abs(x.dot(y)) <= 1e-8) continue;
      const double m = pairwise_c_margin(a, x, y);
      if (m > tol) {
        Counterexample ce;
        ce.kind = CounterexampleKind::Pairwise;
        ce.detail = "c";
        ce.x = x;
        ce.y = y;
        ce.margin = m;
        res.violated = true;
        res.counterexample = ce;
        return res;
      }
    }
  }
  return res;
}

OracleResult sublevel_convexity_test(const SymmetricMatrix& a, const ConeSpec& k, int levels,
                                     long pairs, std::uint64_t seed, double tol) {
  if (levels < 1) throw std::invalid_argument("sublevel test: levels must be >= 1");
  if (pairs < 1) throw std::invalid_argument("sublevel test: pairs must be >= 1");
  if (a.n() != k.n()) throw std::invalid_argument("sublevel test: dimension mismatch");
  OracleResult res;
  Rng rng(seed);
  const SpectralDecomposition dec = spectral_decompose(a);
  const double lo = dec.lambda_min();
  const double hi = dec.lambda_max();
  if (hi - lo <= dec.gap_tolerance) {
    res.diagnostics.push_back("q_A constant: all sublevel sets trivially convex");
    return res;
  }

  auto probe_pair = [&](double c, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                        Rng& combo_rng) -> bool {
    const double weights[4] = {0.5, combo_rng.uniform(0.05, 0.95), combo_rng.uniform(0.05, 0.95),
                               combo_rng.uniform(0.05, 0.95)};
    for (double t : weights) {
      const double viol = sublevel_violation_margin(a, c, x, y, t);
      if (viol > tol) {
        Counterexample ce;
        ce.kind = CounterexampleKind::Sublevel;
        ce.x = x;
        ce.y = y;
        ce.t = t;
        ce.level = c;
        ce.margin = viol;
        res.violated = true;
        res.counterexample = ce;
        return true;
      }
    }
    return false;
  };

  for (int li = 0; li < levels; ++li) {
    const double c = lo + rng.uniform(0.02, 0.98) * (hi - lo);
    // Collect unit members of [phi_A <= c]; membership is scale-invariant.
    // Members near the set boundary (q close to c) are kept separately:
    // convexity failures live where the cross term can push a combination out.
    std::vector<Eigen::VectorXd> members;
    std::vector<Eigen::VectorXd> rim;
    const double rim_band = 0.15 * (hi - lo);
    const long draw_budget = 60 * pairs;
    for (long d = 0; d < draw_budget && static_cast<long>(members.size()) < 2 * pairs; ++d) {
      Eigen::VectorXd x = draw_cap_point(k, rng, d % 10 == 9);
      ++res.samples_used;
      const double q = a.quad(x);
      if (q - c <= 0.0) {
        members.push_back(x);
        if (q >= c - rim_band) rim.push_back(x);
      }
    }
    if (members.size() < 2) {
      res.diagnostics.push_back("level " + std::to_string(c) +
                                " skipped: too few members in budget");
      continue;
    }
    long budget = pairs;
    for (std::size_t i = 0; i < rim.size() && budget > 0; ++i) {
      for (std::size_t j = i + 1; j < rim.size() && budget > 0; ++j) {
        --budget;
        if (probe_pair(c, rim[i], rim[j], rng)) return res;
      }
    }
    const int m = static_cast<int>(members.size());
    while (budget-- > 0) {
      const Eigen::VectorXd& x = members[rng.uniform_int(0, m - 1)];
      const Eigen::VectorXd& y = members[rng.uniform_int(0, m - 1)];
      if (probe_pair(c, x, y, rng)) return res;
    }
  }
  return res;
}

double reverify_counterexample(const SymmetricMatrix& a, const ConeSpec& k,
                               const Counterexample& ce) {
  switch (ce.kind) {
    case CounterexampleKind::Geodesic: {
      if (!(strictly_contains(k, ce.x, 0.0) && strictly_contains(k, ce.y, 0.0))) {
        throw std::logic_error("counterexample endpoints left the cone");
      }
      return geodesic_violation_margin(a, ce.x, ce.y, ce.t);
    }
    case CounterexampleKind::Pairwise: {
      if (!(contains(k, ce.x, 0.0) && contains(k, ce.y, 0.0))) {
        throw std::logic_error("counterexample pair left the cone");
      }
      if (ce.detail == "b") return pairwise_b_margin(a, ce.x, ce.y);
      if (std::abs(ce.x.dot(ce.y)) <= 1e-8) {
        throw std::logic_error("pairwise (c) counterexample has <x,y> ~ 0");
      }
      return pairwise_c_margin(a, ce.x, ce.y);
    }
    case CounterexampleKind::Sublevel: {
      if (!(strictly_contains(k, ce.x, 0.0) && strictly_contains(k, ce.y, 0.0))) {
        throw std::logic_error("sublevel counterexample pair left the cone");
      }
      if (a.quad(ce.x) - ce.level * ce.x.squaredNorm() > 0.0 ||
          a.quad(ce.y) - ce.level * ce.y.squaredNorm() > 0.0) {
        throw std::logic_error("sublevel counterexample pair left the sublevel set");
      }
      return sublevel_violation_margin(a, ce.level, ce.x, ce.y, ce.t);
    }
  }
  throw std::logic_error("unknown counterexample kind");
}

}  // namespace sqc
