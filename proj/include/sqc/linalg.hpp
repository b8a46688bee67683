#pragma once

#include <Eigen/Dense>
#include <optional>

#include "sqc/errors.hpp"

namespace sqc {

/// Dense real symmetric matrix. Entries are symmetrized on construction,
/// so (i,j) and (j,i) compare equal exactly afterwards.
class SymmetricMatrix {
 public:
  /// Symmetrizes the input as (A + A^T)/2 and records the largest
  /// asymmetry |a_ij - a_ji| seen. Requires n >= 2.
  explicit SymmetricMatrix(const Eigen::MatrixXd& a);

  int n() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }
  double asymmetry() const { return asymmetry_; }

  /// q_A(x) = <Ax, x>.
  double quad(const Eigen::VectorXd& x) const { return x.dot(mat_ * x); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return mat_ * x; }

  double frobenius_norm() const { return mat_.norm(); }

  static SymmetricMatrix identity(int n) {
    return SymmetricMatrix(Eigen::MatrixXd::Identity(n, n));
  }

 private:
  Eigen::MatrixXd mat_;
  double asymmetry_ = 0.0;
};

/// Ascending eigenvalues with an orthonormal eigenvector system.
/// Column i of `eigenvectors` is the unit eigenvector for eigenvalues[i];
/// signs are normalized so the largest-magnitude entry of each column is
/// positive, making repeated runs reproducible.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  int multiplicity_of_smallest = 1;
  double gap_tolerance = 0.0;

  int n() const { return static_cast<int>(eigenvalues.size()); }
  /// 0-based accessor: v(0) is the eigenvector for the smallest eigenvalue.
  Eigen::VectorXd v(int i) const { return eigenvectors.col(i); }
  double lambda(int i) const { return eigenvalues[i]; }
  double lambda_min() const { return eigenvalues[0]; }
  double lambda_max() const { return eigenvalues[eigenvalues.size() - 1]; }

  /// True when all eigenvalues agree within gap_tolerance (q_A constant on the sphere).
  bool single_eigenvalue() const {
    return lambda_max() - lambda_min() <= gap_tolerance;
  }
};

/// Relative grouping tolerance 1e-8 * (1 + |lambda_max|) used when the caller
/// does not supply one.
double default_gap_tol(const Eigen::VectorXd& eigenvalues);

/// Eigendecomposition with deterministic ordering and sign convention.
/// multiplicity_of_smallest counts eigenvalues within gap_tol of the smallest.
SpectralDecomposition spectral_decompose(const SymmetricMatrix& a, double gap_tol);

/// Same, with the relative default tolerance.
SpectralDecomposition spectral_decompose(const SymmetricMatrix& a);

/// Householder reflection I - 2 v v^T / |v|^2. Eigenvalues are -1 (on span v,
/// multiplicity 1) and +1 (on the orthogonal complement).
SymmetricMatrix householder(const Eigen::VectorXd& v);

struct PsdResult {
  bool psd = false;
  double lambda_min = 0.0;
  /// Unit vector u with <Au,u> = lambda_min < -tol when not PSD.
  std::optional<Eigen::VectorXd> witness;
};

/// True iff lambda_min(A) >= -tol.
PsdResult is_psd(const SymmetricMatrix& a, double tol);

}  // namespace sqc
