#include "sqc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace sqc {

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("SymmetricMatrix: input must be square");
  }
  if (a.rows() < 2) {
    throw std::invalid_argument("SymmetricMatrix: dimension must be >= 2");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("SymmetricMatrix: entries must be finite");
  }
  asymmetry_ = (a - a.transpose()).cwiseAbs().maxCoeff();
  mat_ = 0.5 * (a + a.transpose());
  // Force bitwise symmetry; averaging alone can differ in the last ulp.
  for (int i = 0; i < mat_.rows(); ++i)
    for (int j = i + 1; j < mat_.cols(); ++j) mat_(j, i) = mat_(i, j);
}

double default_gap_tol(const Eigen::VectorXd& eigenvalues) {
  const double scale = eigenvalues.cwiseAbs().maxCoeff();
  return 1e-8 * (1.0 + scale);
}

namespace {

// Largest-magnitude entry positive; first occurrence wins on ties.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  int idx = 0;
  double best = std::abs(v[0]);
  for (int i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      idx = i;
    }
  }
  if (v[idx] < 0.0) v = -v;
}

}  // namespace

SpectralDecomposition spectral_decompose(const SymmetricMatrix& a, double gap_tol) {
  if (!(gap_tol > 0.0)) {
    throw std::invalid_argument("spectral_decompose: gap_tol must be > 0");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("spectral_decompose: eigen-iteration did not converge");
  }
  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues();  // ascending by contract
  dec.eigenvectors = solver.eigenvectors();
  dec.gap_tolerance = gap_tol;
  for (int i = 0; i < dec.eigenvectors.cols(); ++i) {
    normalize_sign(dec.eigenvectors.col(i));
  }
  int k = 1;
  while (k < dec.n() && dec.eigenvalues[k] - dec.eigenvalues[0] <= gap_tol) ++k;
  dec.multiplicity_of_smallest = k;
  return dec;
}

SpectralDecomposition spectral_decompose(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("spectral_decompose: eigen-iteration did not converge");
  }
  return spectral_decompose(a, default_gap_tol(solver.eigenvalues()));
}

SymmetricMatrix householder(const Eigen::VectorXd& v) {
  const double nrm2 = v.squaredNorm();
  if (!(nrm2 > 0.0)) {
    throw std::invalid_argument("householder: v must be nonzero");
  }
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - (2.0 / nrm2) * (v * v.transpose());
  return SymmetricMatrix(h);
}

PsdResult is_psd(const SymmetricMatrix& a, double tol) {
  if (tol < 0.0) {
    throw std::invalid_argument("is_psd: tol must be >= 0");
  }
  SpectralDecomposition dec = spectral_decompose(a);
  PsdResult res;
  res.lambda_min = dec.lambda_min();
  res.psd = res.lambda_min >= -tol;
  if (!res.psd) res.witness = dec.v(0);
  return res;
}

}  // namespace sqc
