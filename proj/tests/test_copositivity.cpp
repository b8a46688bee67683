#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "sqc/copositivity.hpp"
#include "sqc/rng.hpp"
#include "test_oracles.hpp"

using namespace sqc;

namespace {

SymmetricMatrix diag(const Eigen::VectorXd& d) {
  return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

Eigen::MatrixXd random_symmetric(int n, Rng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
  return 0.5 * (m + m.transpose());
}

void check_not_copositive_witness(const SymmetricMatrix& a, const CopositivityCertificate& cert,
                                  double tol) {
  REQUIRE(cert.witness.has_value());
  const Eigen::VectorXd& w = *cert.witness;
  CHECK(margin(ConeSpec::lorentz(a.n()), w) >= 0.0);  // exact membership
  CHECK(a.quad(w) < -tol * w.squaredNorm());
}

}  // namespace

TEST_CASE("lorentz copositivity: trivial certificates") {
  {
    // J itself: rho = 1 gives the zero matrix.
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(3, 3);
    j(1, 1) = j(2, 2) = -1.0;
    const CopositivityCertificate c = lorentz_copositive(SymmetricMatrix(j), 1e-8);
    CHECK(c.status == CopositivityStatus::Copositive);
    REQUIRE(c.rho.has_value());
    CHECK(lorentz_slemma_value(SymmetricMatrix(j), *c.rho) >= -1e-8);
  }
  {
    const CopositivityCertificate c = lorentz_copositive(SymmetricMatrix::identity(3), 1e-8);
    CHECK(c.status == CopositivityStatus::Copositive);
    CHECK(c.psd_floor >= 1.0 - 1e-6);
  }
  {
    const CopositivityCertificate c =
        lorentz_copositive(SymmetricMatrix(-Eigen::MatrixXd::Identity(3, 3)), 1e-8);
    CHECK(c.status == CopositivityStatus::NotCopositive);
    check_not_copositive_witness(SymmetricMatrix(-Eigen::MatrixXd::Identity(3, 3)), c, 1e-8);
  }
}

TEST_CASE("lorentz copositivity: boundary refutation diag(1,-1.5,-1.5)") {
  // min of q over the Lorentz cap is -0.25, attained on the boundary circle.
  const SymmetricMatrix a = diag(Eigen::Vector3d(1.0, -1.5, -1.5));
  const CopositivityCertificate c = lorentz_copositive(a, 1e-8);
  CHECK(c.status == CopositivityStatus::NotCopositive);
  check_not_copositive_witness(a, c, 1e-8);
  CHECK(c.psd_floor == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK(a.quad(*c.witness) / c.witness->squaredNorm() == doctest::Approx(-0.25).epsilon(1e-6));
}

TEST_CASE("sampled copositivity") {
  {
    const CopositivityCertificate c =
        sampled_copositive(SymmetricMatrix::identity(3), ConeSpec::lorentz(3), 200, 1, 1e-8);
    CHECK(c.status == CopositivityStatus::Copositive);  // PSD shortcut
  }
  {
    const SymmetricMatrix a = diag(Eigen::Vector2d(1.0, -1.0));
    const CopositivityCertificate c =
        sampled_copositive(a, ConeSpec::orthant(2), 500, 2, 1e-8);
    CHECK(c.status == CopositivityStatus::NotCopositive);
    REQUIRE(c.witness.has_value());
    CHECK(margin(ConeSpec::orthant(2), *c.witness) >= 0.0);
    CHECK(a.quad(*c.witness) < 0.0);
    CHECK((*c.witness - Eigen::Vector2d(0.0, 1.0)).norm() <= 1e-6);
  }
  {
    const SymmetricMatrix a = diag(Eigen::Vector3d(0.0, -1.0, -1.0));
    const CopositivityCertificate c =
        sampled_copositive(a, ConeSpec::lorentz(3), 2000, 3, 1e-8);
    CHECK(c.status == CopositivityStatus::NotCopositive);
    REQUIRE(c.witness.has_value());
    CHECK(a.quad(*c.witness) / c.witness->squaredNorm() == doctest::Approx(-0.5).epsilon(1e-5));
    // Exact test concurs.
    CHECK(lorentz_copositive(a, 1e-8).status == CopositivityStatus::NotCopositive);
  }
}

TEST_CASE("slemma value is concave in rho") {
  Rng rng(4242);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + rep % 3;
    const SymmetricMatrix a(random_symmetric(n, rng));
    const double r = 2.0 * a.frobenius_norm() + 1.0;
    const double r1 = rng.uniform(0.0, r);
    const double r2 = rng.uniform(0.0, r);
    const double lhs = lorentz_slemma_value(a, 0.5 * (r1 + r2));
    const double rhs = 0.5 * (lorentz_slemma_value(a, r1) + lorentz_slemma_value(a, r2));
    CHECK(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("exact test never contradicts the sampling refuter") {
  Rng rng(314);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = (rep % 2 == 0) ? 3 : 5;
    const SymmetricMatrix a(random_symmetric(n, rng));
    const CopositivityCertificate exact = lorentz_copositive(a, 1e-8);
    const CopositivityCertificate sampled =
        sampled_copositive(a, ConeSpec::lorentz(n), 1500, 1000 + rep, 1e-8);
    if (sampled.status == CopositivityStatus::NotCopositive) {
      CHECK(exact.status != CopositivityStatus::Copositive);
    }
    if (exact.status == CopositivityStatus::NotCopositive) {
      check_not_copositive_witness(a, exact, 1e-8);
      // The S-lemma value equals the true cap minimum; sampling cannot beat it.
      const double sampled_min =
          sqc::testing::brute_force_cap_min(a, ConeSpec::lorentz(n), 3000, 77 + rep);
      CHECK(sampled_min >= exact.psd_floor - 1e-7);
    }
  }
}

TEST_CASE("copositivity status is scale invariant with rho scaling") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const SymmetricMatrix a(random_symmetric(4, rng));
    const double alpha = rng.uniform(0.2, 5.0);
    const SymmetricMatrix sa(alpha * a.matrix());
    const CopositivityCertificate ca = lorentz_copositive(a, 1e-10);
    const CopositivityCertificate cs = lorentz_copositive(sa, 1e-10);
    if (ca.status != CopositivityStatus::Inconclusive &&
        cs.status != CopositivityStatus::Inconclusive) {
      CHECK(ca.status == cs.status);
      if (ca.status == CopositivityStatus::Copositive && ca.psd_floor < -1e-12) {
        // Interior maximizer: the optimal multiplier scales linearly.
        CHECK(*cs.rho == doctest::Approx(alpha * *ca.rho).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("psd shortcut implies lorentz copositive with rho 0 feasible") {
  Rng rng(55);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd m = random_symmetric(4, rng);
    m = m * m.transpose();  // PSD
    const SymmetricMatrix a(m);
    const CopositivityCertificate c = lorentz_copositive(a, 1e-8);
    CHECK(c.status == CopositivityStatus::Copositive);
  }
}

TEST_CASE("z-property sampling") {
  {
    const ZPropertyResult r =
        z_property_sampled(SymmetricMatrix::identity(3), ConeSpec::orthant(3), 200, 1, 1e-10);
    CHECK(r.status == ZPropertyStatus::Consistent);
    CHECK(r.worst <= 1e-10);
  }
  {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    const ZPropertyResult r =
        z_property_sampled(SymmetricMatrix(m), ConeSpec::orthant(2), 200, 1, 1e-10);
    CHECK(r.status == ZPropertyStatus::Violated);
    REQUIRE(r.witness_pair.has_value());
    const auto& [x, y] = *r.witness_pair;
    CHECK(x == Eigen::Vector2d(1.0, 0.0));
    CHECK(y == Eigen::Vector2d(0.0, 1.0));
    CHECK(std::abs(x.dot(y)) <= 1e-12);
  }
  {
    // For A = I every complementary pair gives <x, y> = 0 exactly.
    const ZPropertyResult r =
        z_property_sampled(SymmetricMatrix::identity(3), ConeSpec::lorentz(3), 500, 1, 1e-10);
    CHECK(r.status == ZPropertyStatus::Consistent);
    CHECK(std::abs(r.worst) <= 1e-10);
  }
  Eigen::MatrixXd basis(3, 2);
  basis << 0, 0, 1, 0, 0, 1;
  const ConeSpec ell =
      ConeSpec::elliptic(Eigen::Vector3d(1, 0, 0), basis, Eigen::Vector2d(1.0, 1.0));
  CHECK_THROWS_AS(z_property_sampled(SymmetricMatrix::identity(3), ell, 10, 1, 1e-10),
                  UnsupportedCone);
}
