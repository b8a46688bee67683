#include "sqc/copositivity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "sqc/optim.hpp"
#include "sqc/rng.hpp"

namespace sqc {

namespace {

Eigen::MatrixXd shifted_by_j(const SymmetricMatrix& a, double rho) {
  Eigen::MatrixXd m = a.matrix();
  m(0, 0) -= rho;
  for (int i = 1; i < m.rows(); ++i) m(i, i) += rho;
  return m;
}

double quad_j(const Eigen::VectorXd& x) {
  return x[0] * x[0] - x.tail(x.size() - 1).squaredNorm();
}

struct GoldenResult {
  double rho = 0.0;
  double value = 0.0;
};

// Maximize the concave g over [0, hi] to interval width < 1e-10 * hi.
GoldenResult golden_max(const std::function<double(double)>& g, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c), gd = g(d);
  const double width_tol = 1e-10 * hi;
  while (b - a > width_tol) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  GoldenResult res;
  res.rho = 0.5 * (a + b);
  res.value = g(res.rho);
  // The endpoints can beat the interior when the max sits on the boundary.
  const double g0 = g(0.0);
  if (g0 > res.value) {
    res.rho = 0.0;
    res.value = g0;
  }
  return res;
}

// Boundary snap: replace the first coordinate by the tail norm so that the
// Lorentz margin recomputes to exactly zero.
Eigen::VectorXd snap_to_lorentz_boundary(const Eigen::VectorXd& u, bool flip_tail) {
  Eigen::VectorXd w(u.size());
  const Eigen::VectorXd tail = flip_tail ? Eigen::VectorXd(-u.tail(u.size() - 1))
                                         : Eigen::VectorXd(u.tail(u.size() - 1));
  w[0] = tail.norm();
  w.tail(u.size() - 1) = tail;
  return w;
}

}  // namespace

double lorentz_slemma_value(const SymmetricMatrix& a, double rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(shifted_by_j(a, rho),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("lorentz_slemma_value: eigen-iteration failed");
  }
  return solver.eigenvalues().minCoeff();
}

CopositivityCertificate lorentz_copositive(const SymmetricMatrix& a, double tol) {
  const int n = a.n();
  auto g = [&a](double rho) { return lorentz_slemma_value(a, rho); };

  double hi = 2.0 * a.frobenius_norm() + 1.0;
  GoldenResult opt = golden_max(g, hi);
  // g is concave with g -> -inf; widen until the maximizer is interior.
  int widenings = 0;
  while (hi - opt.rho < 1e-6 * hi && widenings < 40) {
    hi *= 4.0;
    opt = golden_max(g, hi);
    ++widenings;
  }

  CopositivityCertificate cert;
  cert.psd_floor = opt.value;
  if (opt.value >= -tol) {
    cert.status = CopositivityStatus::Copositive;
    cert.rho = opt.rho;
    return cert;
  }

  // Refutation: assemble x in L with q_A(x) < 0 from the bottom eigenspace of
  // A - rho* J. At the interior optimum that eigenspace admits a direction
  // with <Jx,x> = 0, where q_A(x) = lambda_min < 0.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(shifted_by_j(a, opt.rho));
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("lorentz_copositive: eigen-iteration failed");
  }
  const Eigen::VectorXd evals = solver.eigenvalues();
  const double lo = evals[0];
  const double cluster_tol = 1e-7 * (1.0 + std::abs(lo));
  std::vector<Eigen::VectorXd> candidates;
  int dim = 0;
  while (dim < n && evals[dim] - lo <= cluster_tol) ++dim;

  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd u = solver.eigenvectors().col(i);
    if (u[0] < 0.0) u = -u;
    if (quad_j(u) >= 0.0) candidates.push_back(u);  // already in L u -L
    candidates.push_back(snap_to_lorentz_boundary(u, false));
    candidates.push_back(snap_to_lorentz_boundary(u, true));
  }
  if (dim >= 2) {
    // Zero the J-form between the extreme J-values of the cluster.
    Eigen::MatrixXd u_block = solver.eigenvectors().leftCols(dim);
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n);
    for (int i = 1; i < n; ++i) j(i, i) = -1.0;
    Eigen::MatrixXd jm = u_block.transpose() * j * u_block;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jsolver(jm);
    const Eigen::VectorXd jv = jsolver.eigenvalues();
    if (jv.minCoeff() <= 0.0 && jv.maxCoeff() >= 0.0) {
      const Eigen::VectorXd p = u_block * jsolver.eigenvectors().col(dim - 1);  // J-max
      const Eigen::VectorXd q = u_block * jsolver.eigenvectors().col(0);        // J-min
      const double qa = quad_j(p);
      const double qc = quad_j(q);
      const double qb = p[0] * q[0] - p.tail(n - 1).dot(q.tail(n - 1));
      if (std::abs(qc) > 1e-300) {
        const double disc = std::sqrt(std::max(0.0, qb * qb - qa * qc));
        for (const double t : {(-qb + disc) / qc, (-qb - disc) / qc}) {
          Eigen::VectorXd w = (p + t * q).normalized();
          if (w[0] < 0.0) w = -w;
          candidates.push_back(w);
          candidates.push_back(snap_to_lorentz_boundary(w, false));
        }
      } else if (std::abs(qa) <= 1e-300) {
        candidates.push_back(p);
      }
    }
  }

  const ConeSpec lorentz = ConeSpec::lorentz(n);
  double best_value = 0.0;
  Eigen::VectorXd best;
  for (Eigen::VectorXd w : candidates) {
    const double nrm = w.norm();
    if (nrm < 1e-12) continue;
    w /= nrm;
    if (margin(lorentz, w) < 0.0) continue;  // exact membership
    const double val = a.quad(w);
    if (val < best_value) {
      best_value = val;
      best = w;
    }
  }
  if (best.size() > 0 && best_value < -tol) {
    cert.status = CopositivityStatus::NotCopositive;
    cert.witness = best;
    cert.rho = opt.rho;
    return cert;
  }
  cert.status = CopositivityStatus::Inconclusive;
  return cert;
}

CopositivityCertificate sampled_copositive(const SymmetricMatrix& a, const ConeSpec& k,
                                           long samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw std::invalid_argument("sampled_copositive: samples must be >= 1");
  if (a.n() != k.n()) throw std::invalid_argument("sampled_copositive: dimension mismatch");
  CopositivityCertificate cert;

  PsdResult psd = is_psd(a, tol);
  cert.psd_floor = psd.lambda_min;
  if (psd.psd) {  // sufficient shortcut; the only way to a positive certificate
    cert.status = CopositivityStatus::Copositive;
    cert.rho = 0.0;
    return cert;
  }

  Rng rng(seed);
  std::vector<Eigen::VectorXd> pool;
  pool.reserve(samples);
  try {
    for (long i = 0; i < samples; ++i) {
      if (i % 10 == 9) {
        pool.push_back(sample_cap_near_boundary(k, rng, 0.05));
      } else {
        pool.push_back(sample_cap(k, rng, 1e-9));
      }
    }
  } catch (const SamplingExhausted&) {
    if (pool.empty()) {
      cert.status = CopositivityStatus::Inconclusive;
      return cert;
    }
  }

  std::sort(pool.begin(), pool.end(), [&a](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return a.quad(x) < a.quad(y);
  });
  std::vector<Eigen::VectorXd> starts(pool.begin(),
                                      pool.begin() + std::min<std::size_t>(pool.size(), 10));
  optim::Objective f = [&a](const Eigen::VectorXd& x) { return a.quad(x); };
  optim::Gradient g = [&a](const Eigen::VectorXd& x) { return Eigen::VectorXd(2.0 * a.apply(x)); };
  optim::CapResult best = optim::multistart_descend(f, g, optim::cone_feasibility(k, 1e-12),
                                                    optim::cone_retraction(k), starts);

  // Retraction rounding can land an ulp outside; repair before verifying.
  const Eigen::VectorXd w = best.x.size() > 0 ? snap_into_cone(k, best.x) : best.x;
  if (w.size() > 0 && margin(k, w) >= 0.0 && a.quad(w) < -tol * w.squaredNorm()) {
    cert.status = CopositivityStatus::NotCopositive;
    cert.witness = w;
    return cert;
  }
  cert.status = CopositivityStatus::Inconclusive;  // reported as "no violation found"
  return cert;
}

ZPropertyResult z_property_sampled(const SymmetricMatrix& a, const ConeSpec& k, long pairs,
                                   std::uint64_t seed, double tol) {
  if (pairs < 1) throw std::invalid_argument("z_property_sampled: pairs must be >= 1");
  if (!k.self_dual() || k.is_negated()) {
    throw UnsupportedCone("z_property_sampled: requires the orthant or the Lorentz cone");
  }
  const int n = k.n();
  ZPropertyResult res;
  res.worst = -std::numeric_limits<double>::infinity();

  auto consider = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double v = y.dot(a.apply(x));
    if (v > res.worst) res.worst = v;
    if (v > tol && !res.witness_pair) {
      res.status = ZPropertyStatus::Violated;
      res.witness_pair = std::make_pair(x, y);
    }
    return res.witness_pair.has_value();
  };

  Rng rng(seed);
  long used = 0;
  if (k.kind() == ConeKind::Orthant) {
    // Canonical complementary pairs first: they witness any positive
    // off-diagonal entry deterministically.
    for (int i = 0; i < n && used < pairs; ++i) {
      for (int j = 0; j < n && used < pairs; ++j) {
        if (i == j) continue;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        x[i] = 1.0;
        y[j] = 1.0;
        ++used;
        if (consider(x, y)) return res;
      }
    }
    while (used < pairs) {
      // Random disjoint supports with nonnegative entries.
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      bool has_x = false, has_y = false;
      for (int i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5) {
          x[i] = std::abs(rng.normal());
          has_x = true;
        } else {
          y[i] = std::abs(rng.normal());
          has_y = true;
        }
      }
      if (!has_x || !has_y) continue;
      ++used;
      if (consider(x, y)) return res;
    }
  } else {
    // Lorentz: x on the boundary, y = 2 x_1 e^1 - x = (x_1, -x_rest).
    for (int j = 1; j < n && used < pairs; ++j) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      x[0] = 1.0;
      x[j] = 1.0;
      Eigen::VectorXd y = x;
      y[j] = -1.0;
      ++used;
      if (consider(x, y)) return res;
    }
    while (used < pairs) {
      const double r = rng.uniform(0.1, 1.0);
      Eigen::VectorXd u = r * rng.unit_vector(n - 1);
      Eigen::VectorXd x(n), y(n);
      x[0] = u.norm();
      x.tail(n - 1) = u;
      y[0] = x[0];
      y.tail(n - 1) = -u;
      ++used;
      if (consider(x, y)) return res;
    }
  }
  return res;
}

}  // namespace sqc
