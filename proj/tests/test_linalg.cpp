#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "sqc/linalg.hpp"
#include "sqc/rng.hpp"
#include "test_oracles.hpp"

using namespace sqc;

namespace {

Eigen::MatrixXd random_symmetric(int n, Rng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
  return 0.5 * (m + m.transpose());
}

void check_decomposition_invariants(const SymmetricMatrix& a, const SpectralDecomposition& dec) {
  const int n = a.n();
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(dec.v(i).norm() - 1.0) <= 1e-10);
    const double lam = dec.lambda(i);
    CHECK((a.apply(dec.v(i)) - lam * dec.v(i)).norm() <= 1e-8 * (1.0 + std::abs(lam)));
    for (int j = i + 1; j < n; ++j) {
      CHECK(std::abs(dec.v(i).dot(dec.v(j))) <= 1e-10);
      CHECK(dec.lambda(i) <= dec.lambda(j));
    }
  }
}

}  // namespace

TEST_CASE("symmetric matrix symmetrizes and validates") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 0.0, 3.0;
  SymmetricMatrix a(m);
  CHECK(a(0, 1) == a(1, 0));
  CHECK(a(0, 1) == doctest::Approx(1.0));
  CHECK(a.asymmetry() == doctest::Approx(2.0));

  CHECK_THROWS_AS(SymmetricMatrix(Eigen::MatrixXd::Identity(1, 1)), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymmetricMatrix{bad}, std::invalid_argument);
}

TEST_CASE("spectral decomposition of diag(3,1,2)") {
  Eigen::MatrixXd m = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  const SpectralDecomposition dec = spectral_decompose(SymmetricMatrix(m), 1e-8);
  CHECK(dec.eigenvalues.isApprox(Eigen::Vector3d(1.0, 2.0, 3.0)));
  CHECK(dec.multiplicity_of_smallest == 1);
  CHECK(dec.v(0).isApprox(Eigen::Vector3d(0, 1, 0)));
  CHECK(dec.v(1).isApprox(Eigen::Vector3d(0, 0, 1)));
  CHECK(dec.v(2).isApprox(Eigen::Vector3d(1, 0, 0)));
}

TEST_CASE("identity has full multiplicity") {
  const SpectralDecomposition dec = spectral_decompose(SymmetricMatrix::identity(3), 1e-8);
  CHECK(dec.multiplicity_of_smallest == 3);
  CHECK(dec.single_eigenvalue());
}

TEST_CASE("householder reflection in the plane") {
  // H from v = (1,1)/sqrt(2): eigenvalues (-1, 1), v^1 = (1,1)/sqrt(2).
  Eigen::Vector2d v(1.0, 1.0);
  const SymmetricMatrix h = householder(v);
  CHECK((h.apply(v) + v).norm() <= 1e-12);  // H v = -v
  Eigen::Vector2d u(1.0, -1.0);
  CHECK((h.apply(u) - u).norm() <= 1e-12);  // H u = u for u perp v

  const SpectralDecomposition dec = spectral_decompose(h, 1e-8);
  CHECK(dec.eigenvalues.isApprox(Eigen::Vector2d(-1.0, 1.0)));
  CHECK(dec.v(0).isApprox(Eigen::Vector2d(1.0, 1.0).normalized()));
  CHECK(dec.multiplicity_of_smallest == 1);
}

TEST_CASE("householder basics") {
  const SymmetricMatrix h = householder(Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(h.matrix().isApprox(Eigen::Vector3d(-1.0, 1.0, 1.0).asDiagonal().toDenseMatrix()));

  const SymmetricMatrix h2 = householder(Eigen::Vector3d(1.0, 1.0, 0.0));
  CHECK((h2.apply(Eigen::Vector3d(1, 1, 0)) + Eigen::Vector3d(1, 1, 0)).norm() <= 1e-12);

  CHECK_THROWS_AS(householder(Eigen::Vector3d::Zero()), std::invalid_argument);

  // Reflections are isometries.
  const SymmetricMatrix h3 = householder(Eigen::Vector3d(1.0, 2.0, 2.0));
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = rng.normal_vector(3);
    CHECK(std::abs(h3.apply(x).norm() - x.norm()) <= 1e-10);
  }
}

TEST_CASE("is_psd basics and witness") {
  CHECK(is_psd(SymmetricMatrix::identity(3), 0.0).psd);

  Eigen::MatrixXd m = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  const PsdResult res = is_psd(SymmetricMatrix(m), 1e-12);
  CHECK(!res.psd);
  REQUIRE(res.witness.has_value());
  CHECK(SymmetricMatrix(m).quad(*res.witness) < -1e-12);
  CHECK(res.witness->isApprox(Eigen::Vector2d(0.0, 1.0)));

  CHECK(is_psd(SymmetricMatrix(Eigen::MatrixXd::Zero(3, 3)), 0.0).psd);  // boundary PSD
}

TEST_CASE("reconstruction and completeness over random matrices") {
  Rng rng(2024);
  for (int n : {2, 3, 5, 8, 12}) {
    const SymmetricMatrix a(random_symmetric(n, rng));
    const SpectralDecomposition dec = spectral_decompose(a);
    check_decomposition_invariants(a, dec);

    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) sum += dec.lambda(i) * dec.v(i) * dec.v(i).transpose();
    CHECK((a.matrix() - sum).norm() <= 1e-8 * (1.0 + a.frobenius_norm()));

    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::VectorXd x = rng.normal_vector(n);
      double parts = 0.0;
      for (int i = 0; i < n; ++i) parts += std::pow(dec.v(i).dot(x), 2);
      CHECK(std::abs(parts - x.squaredNorm()) <= 1e-8 * (1.0 + x.squaredNorm()));
    }
  }
}

TEST_CASE("is_psd agrees with brute-force sphere sampling") {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + rep % 5;  // up to 6
    const SymmetricMatrix a(random_symmetric(n, rng));
    const PsdResult res = is_psd(a, 1e-9);
    double sampled_min = std::numeric_limits<double>::infinity();
    Rng inner(500 + rep);
    for (int i = 0; i < 100000 / (rep + 1); ++i) {
      const Eigen::VectorXd u = inner.unit_vector(n);
      sampled_min = std::min(sampled_min, a.quad(u));
    }
    if (res.psd) {
      CHECK(sampled_min >= -1e-9);
    } else {
      CHECK(res.lambda_min < 0.0);
      // The eigen-witness must beat anything sampling found.
      CHECK(a.quad(*res.witness) <= sampled_min + 1e-9);
    }
  }
}

TEST_CASE("eigenvector sign convention is deterministic") {
  Rng rng(7);
  const SymmetricMatrix a(random_symmetric(5, rng));
  const SpectralDecomposition d1 = spectral_decompose(a);
  const SpectralDecomposition d2 = spectral_decompose(a);
  CHECK(d1.eigenvectors == d2.eigenvectors);
  for (int i = 0; i < 5; ++i) {
    int idx = 0;
    d1.v(i).cwiseAbs().maxCoeff(&idx);
    CHECK(d1.v(i)[idx] > 0.0);
  }
}
