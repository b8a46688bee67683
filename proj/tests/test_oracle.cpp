#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "sqc/oracle.hpp"
#include "sqc/rng.hpp"

using namespace sqc;

namespace {

SymmetricMatrix diag(const Eigen::Vector3d& d) {
  return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

}  // namespace

TEST_CASE("geodesic point: endpoints, symmetry and arc length") {
  const Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0);
  CHECK(geodesic_point(e1, e2, 0.5).isApprox(Eigen::Vector3d(1, 1, 0).normalized()));
  CHECK(geodesic_point(e1, e2, 0.0).isApprox(e1));
  CHECK(geodesic_point(e1, e2, 1.0).isApprox(e2));

  const Eigen::Vector3d y = Eigen::Vector3d(1, 1, 0).normalized();
  const Eigen::Vector3d mid = geodesic_point(e1, y, 0.5);
  CHECK(std::acos(e1.dot(mid)) == doctest::Approx(M_PI / 8).epsilon(1e-12));

  CHECK_THROWS_AS(geodesic_point(e1, e1, 0.5), DegenerateGeodesic);
  CHECK_THROWS_AS(geodesic_point(e1, Eigen::Vector3d(-1, 0, 0), 0.5), DegenerateGeodesic);
}

TEST_CASE("slerp validity over random pairs") {
  Rng rng(123);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 3 + rep % 4;
    const Eigen::VectorXd x = rng.unit_vector(n);
    const Eigen::VectorXd y = rng.unit_vector(n);
    const double theta = std::acos(std::min(1.0, std::max(-1.0, x.dot(y))));
    if (theta < 1e-4 || theta > M_PI - 1e-4) continue;
    const double t = rng.uniform();
    const Eigen::VectorXd p = geodesic_point(x, y, t);
    CHECK(std::abs(p.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(std::acos(std::min(1.0, std::max(-1.0, x.dot(p)))) - t * theta) <= 1e-9);
  }
}

TEST_CASE("rayleigh quotient") {
  const SymmetricMatrix a(Eigen::MatrixXd(Eigen::Vector2d(1.0, 2.0).asDiagonal()));
  CHECK(rayleigh(a, Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
  CHECK(rayleigh(a, Eigen::Vector2d(1, 1)) == doctest::Approx(1.5));
  CHECK(rayleigh(a, Eigen::Vector2d(3, 3)) == doctest::Approx(rayleigh(a, Eigen::Vector2d(1, 1))));
  CHECK_THROWS_AS(rayleigh(a, Eigen::Vector2d::Zero()), std::invalid_argument);
}

TEST_CASE("geodesic oracle: constant form never violates") {
  const OracleResult r = geodesic_quasiconvexity_test(SymmetricMatrix::identity(3),
                                                      ConeSpec::lorentz(3), 2000, 17, 9, 1e-8);
  CHECK(!r.violated);
}

TEST_CASE("geodesic oracle refutes I - e2 e2^T on the Lorentz cap") {
  // v^1 = e2 is not in the cone, so a violating geodesic must exist.
  const SymmetricMatrix a = diag(Eigen::Vector3d(1.0, 0.0, 1.0));
  const ConeSpec k = ConeSpec::lorentz(3);
  const OracleResult r = geodesic_quasiconvexity_test(a, k, 20000, 33, 7, 1e-8);
  CHECK(r.violated);
  REQUIRE(r.counterexample.has_value());
  const double margin_again = reverify_counterexample(a, k, *r.counterexample);
  CHECK(margin_again > 1e-8);
  CHECK(std::abs(margin_again - r.counterexample->margin) <= 1e-12 * (1.0 + margin_again));
}

TEST_CASE("geodesic oracle finds nothing for I - e1 e1^T on the Lorentz cap") {
  const SymmetricMatrix a = diag(Eigen::Vector3d(0.0, 1.0, 1.0));
  const OracleResult r =
      geodesic_quasiconvexity_test(a, ConeSpec::lorentz(3), 10000, 33, 7, 1e-8);
  CHECK(!r.violated);
}

TEST_CASE("pairwise tests agree with the geodesic verdicts") {
  {
    const OracleResult r =
        pairwise_test(SymmetricMatrix::identity(3), ConeSpec::lorentz(3), 4000, 3, 1e-8);
    CHECK(!r.violated);
  }
  {
    const SymmetricMatrix a = diag(Eigen::Vector3d(1.0, 0.0, 1.0));
    const ConeSpec k = ConeSpec::lorentz(3);
    const OracleResult r = pairwise_test(a, k, 40000, 3, 1e-8);
    CHECK(r.violated);
    REQUIRE(r.counterexample.has_value());
    CHECK(reverify_counterexample(a, k, *r.counterexample) > 1e-8);
  }
}

TEST_CASE("pairwise test is shift invariant on subtest (b)") {
  // Both sides of (b) gain c<x,y> under A -> A + cI, so shifted matrices
  // violate on exactly the same pairs.
  Rng rng(88);
  Eigen::MatrixXd m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
  const SymmetricMatrix a(0.5 * (m + m.transpose()));
  const SymmetricMatrix shifted(a.matrix() + 2.5 * Eigen::MatrixXd::Identity(3, 3));
  for (int rep = 0; rep < 2000; ++rep) {
    const Eigen::VectorXd x = sample_cap(ConeSpec::lorentz(3), rng, 1e-9);
    const Eigen::VectorXd y = sample_cap(ConeSpec::lorentz(3), rng, 1e-9);
    const double mb = pairwise_b_margin(a, x, y);
    const double ms = pairwise_b_margin(shifted, x, y);
    CHECK(std::abs(mb - ms) <= 1e-9 * (1.0 + std::abs(mb)));
  }
}

TEST_CASE("sublevel convexity: structural no-violation cases") {
  // c >= lambda_n means the set is all of int K; c < lambda_1 means empty.
  const SymmetricMatrix a = diag(Eigen::Vector3d(0.0, 1.0, 2.0));
  const ConeSpec k = ConeSpec::lorentz(3);
  for (double c : {2.5, -0.5}) {
    Rng rng(10);
    long members = 0;
    for (int rep = 0; rep < 2000; ++rep) {
      const Eigen::VectorXd x = sample_cap(k, rng, 1e-9);
      if (a.quad(x) - c <= 0.0) ++members;
    }
    if (c >= 2.5) CHECK(members == 2000);
    if (c < 0.0) CHECK(members == 0);
  }
}

TEST_CASE("sublevel oracle catches the non-convex level of a perturbed split") {
  // A = diag(0, 0.05, 1): lambda_2 sits strictly inside the cap range, so a
  // level in (lambda_2, cap max) has a non-convex sublevel cone.
  const SymmetricMatrix a = diag(Eigen::Vector3d(0.0, 0.05, 1.0));
  const ConeSpec k = ConeSpec::lorentz(3);
  const OracleResult r = sublevel_convexity_test(a, k, 16, 500, 21, 1e-8);
  CHECK(r.violated);
  REQUIRE(r.counterexample.has_value());
  CHECK(reverify_counterexample(a, k, *r.counterexample) > 1e-8);
}

TEST_CASE("cross-oracle translation: geodesic violation to sublevel and pairwise") {
  const SymmetricMatrix a = diag(Eigen::Vector3d(1.0, 0.0, 1.0));
  const ConeSpec k = ConeSpec::lorentz(3);
  const OracleResult r = geodesic_quasiconvexity_test(a, k, 20000, 33, 91, 1e-8);
  REQUIRE(r.violated);
  const Counterexample& ce = *r.counterexample;

  // Sublevel translation at c = max(q(x), q(y)): the positive combination
  // behind gamma(t) escapes the sublevel cone.
  const double c = std::max(a.quad(ce.x), a.quad(ce.y));
  const double theta = std::acos(ce.x.dot(ce.y));
  const double w1 = std::sin((1.0 - ce.t) * theta);
  const double w2 = std::sin(ce.t * theta);
  const double s = w1 / (w1 + w2);
  CHECK(sublevel_violation_margin(a, c, ce.x, ce.y, s) > 1e-10);

  // Pairwise translation: a violating symmetric sub-arc midpoint implies (b)
  // fails for the sub-arc endpoints.
  if (std::abs(ce.t - 0.5) < 1e-12) {
    CHECK(pairwise_b_margin(a, ce.x, ce.y) > 0.0);
  }
}

TEST_CASE("oracle throws on cones too thin to sample") {
  // A degenerate-weight elliptic cone flattened to a hyperplane slab would be
  // pathological; emulate thinness with an elliptic cone of huge weights.
  Eigen::MatrixXd basis(3, 2);
  basis << 0, 0, 1, 0, 0, 1;
  const ConeSpec thin = ConeSpec::elliptic(Eigen::Vector3d(1, 0, 0), basis,
                                           Eigen::Vector2d(1e28, 1e28));
  // The parametric sampler still works here, so thinness only bites when the
  // margin demanded is unreachable; the guard is exercised via sample_cap.
  Rng rng(3);
  CHECK_THROWS_AS(sample_cap(thin, rng, 0.999999, 2000), SamplingExhausted);
}
