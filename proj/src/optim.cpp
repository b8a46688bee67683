#include "sqc/optim.hpp"

#include <algorithm>
#include <cmath>

namespace sqc::optim {

CapResult descend(const Objective& f, const Gradient& g, const Feasible& feasible,
                  const Retract& retract, const Eigen::VectorXd& start,
                  const CapSettings& settings) {
  CapResult res;
  Eigen::VectorXd x = start;
  double fx = f(x);
  double step = settings.initial_step;
  for (int it = 0; it < settings.max_iter; ++it) {
    Eigen::VectorXd grad = g(x);
    Eigen::VectorXd gt = grad - grad.dot(x) * x;  // tangential component
    const double gn = gt.norm();
    if (gn <= settings.stationarity_tol) {
      res.stationary = true;
      break;
    }
    bool improved = false;
    while (step >= settings.min_step) {
      Eigen::VectorXd cand = retract(x - step * gt);
      if (cand.size() > 0 && feasible(cand)) {
        const double disp2 = (cand - x).squaredNorm();
        const double fc = f(cand);
        // Projected-gradient Armijo: sufficient decrease against the actual
        // displacement, so truncated boundary steps remain acceptable.
        if (disp2 > 0.0 && fc <= fx - (1e-4 / step) * disp2) {
          x = cand;
          fx = fc;
          improved = true;
          step = std::min(step * 2.0, 1e3);
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;  // line search exhausted: boundary-stationary
  }
  res.x = x;
  res.value = fx;
  res.converged = res.stationary;
  return res;
}

CapResult multistart_descend(const Objective& f, const Gradient& g, const Feasible& feasible,
                             const Retract& retract, const std::vector<Eigen::VectorXd>& starts,
                             const CapSettings& settings) {
  CapResult best;
  std::vector<double> values;
  values.reserve(starts.size());
  bool any_stationary = false;
  for (const Eigen::VectorXd& s : starts) {
    CapResult r = descend(f, g, feasible, retract, s, settings);
    values.push_back(r.value);
    any_stationary = any_stationary || r.stationary;
    if (r.value < best.value) best = r;
  }
  int agree = 0;
  for (double v : values) {
    if (v - best.value <= 1e-9 * (1.0 + std::abs(best.value))) ++agree;
  }
  best.converged = any_stationary || agree >= std::min<int>(3, static_cast<int>(starts.size()));
  return best;
}

Retract cone_retraction(const ConeSpec& k) {
  switch (k.kind()) {
    case ConeKind::Orthant:
      if (!k.is_negated()) {
        return [](const Eigen::VectorXd& z) -> Eigen::VectorXd {
          Eigen::VectorXd p = z.cwiseMax(0.0);
          const double nrm = p.norm();
          if (nrm < 1e-300) return Eigen::VectorXd();
          return p / nrm;
        };
      }
      return [](const Eigen::VectorXd& z) -> Eigen::VectorXd {
        Eigen::VectorXd p = z.cwiseMin(0.0);
        const double nrm = p.norm();
        if (nrm < 1e-300) return Eigen::VectorXd();
        return p / nrm;
      };
    case ConeKind::Lorentz: {
      const bool neg = k.is_negated();
      return [neg](const Eigen::VectorXd& z) -> Eigen::VectorXd {
        Eigen::VectorXd p = project_lorentz(neg ? Eigen::VectorXd(-z) : z).plus;
        const double nrm = p.norm();
        if (nrm < 1e-300) return Eigen::VectorXd();
        return neg ? Eigen::VectorXd(-p / nrm) : Eigen::VectorXd(p / nrm);
      };
    }
    case ConeKind::Elliptic:
    default:
      // No closed-form projection; snap onto the boundary by raising the
      // axis coordinate, which keeps descent able to slide along it.
      return [k](const Eigen::VectorXd& z) -> Eigen::VectorXd {
        Eigen::VectorXd p = k.is_negated() ? Eigen::VectorXd(-z) : z;
        const Eigen::VectorXd proj = k.basis().transpose() * p;
        const double psi =
            std::sqrt(std::max(0.0, proj.dot(k.weights().cwiseProduct(proj))));
        const double axial = k.axis().dot(p);
        if (axial < psi) p += (psi - axial) * k.axis();
        const double nrm = p.norm();
        if (nrm < 1e-300) return Eigen::VectorXd();
        p /= nrm;
        return k.is_negated() ? Eigen::VectorXd(-p) : p;
      };
  }
}

Feasible cone_feasibility(const ConeSpec& k, double tol) {
  return [k, tol](const Eigen::VectorXd& x) { return margin(k, x) >= -tol; };
}

Eigen::VectorXd margin_gradient(const ConeSpec& k, const Eigen::VectorXd& x) {
  const Eigen::VectorXd z = k.is_negated() ? Eigen::VectorXd(-x) : x;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
  switch (k.kind()) {
    case ConeKind::Orthant: {
      int idx = 0;
      z.minCoeff(&idx);
      grad[idx] = 1.0;
      break;
    }
    case ConeKind::Lorentz: {
      grad[0] = 1.0;
      const double tail_norm = z.tail(z.size() - 1).norm();
      if (tail_norm > 1e-300) {
        grad.tail(z.size() - 1) = -z.tail(z.size() - 1) / tail_norm;
      }
      break;
    }
    case ConeKind::Elliptic: {
      const Eigen::VectorXd proj = k.basis().transpose() * z;
      const Eigen::VectorXd wproj = k.weights().cwiseProduct(proj);
      const double psi = std::sqrt(std::max(0.0, proj.dot(wproj)));
      grad = k.axis();
      if (psi > 1e-300) grad -= (k.basis() * wproj) / psi;
      break;
    }
  }
  return k.is_negated() ? Eigen::VectorXd(-grad) : grad;
}

namespace {

std::vector<Eigen::VectorXd> cap_starts(const ConeSpec& k, int starts, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(starts);
  // Deterministic seeds near the cone's natural directions.
  switch (k.kind()) {
    case ConeKind::Orthant: {
      Eigen::VectorXd center = Eigen::VectorXd::Ones(k.n()).normalized();
      pts.push_back(k.is_negated() ? Eigen::VectorXd(-center) : center);
      break;
    }
    case ConeKind::Lorentz: {
      Eigen::VectorXd axis = Eigen::VectorXd::Zero(k.n());
      axis[0] = 1.0;
      pts.push_back(k.is_negated() ? Eigen::VectorXd(-axis) : axis);
      break;
    }
    case ConeKind::Elliptic:
      pts.push_back(k.is_negated() ? Eigen::VectorXd(-k.axis()) : k.axis());
      break;
  }
  const int interior = std::max(1, (9 * starts) / 10);
  while (static_cast<int>(pts.size()) < interior) {
    pts.push_back(sample_cap(k, rng, 1e-9));
  }
  while (static_cast<int>(pts.size()) < starts) {
    pts.push_back(sample_cap_near_boundary(k, rng, 0.05));
  }
  return pts;
}

}  // namespace

CapResult quadratic_cap_min(const SymmetricMatrix& a, const ConeSpec& k, int starts,
                            std::uint64_t seed, const CapSettings& settings) {
  Objective f = [&a](const Eigen::VectorXd& x) { return a.quad(x); };
  Gradient g = [&a](const Eigen::VectorXd& x) { return Eigen::VectorXd(2.0 * a.apply(x)); };
  return multistart_descend(f, g, cone_feasibility(k, 1e-12), cone_retraction(k),
                            cap_starts(k, starts, seed), settings);
}

CapRange quadratic_cap_range(const SymmetricMatrix& a, const ConeSpec& k, int starts,
                             std::uint64_t seed, const CapSettings& settings) {
  CapRange range;
  CapResult lo = quadratic_cap_min(a, k, starts, seed, settings);
  SymmetricMatrix neg(-a.matrix());
  CapResult hi = quadratic_cap_min(neg, k, starts, seed + 1, settings);
  range.min_value = lo.value;
  range.argmin = lo.x;
  range.min_converged = lo.converged;
  range.max_value = -hi.value;
  range.argmax = hi.x;
  range.max_converged = hi.converged;
  return range;
}

}  // namespace sqc::optim
