#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "sqc/cones.hpp"
#include "sqc/linalg.hpp"
#include "sqc/rng.hpp"
#include "test_oracles.hpp"

using namespace sqc;

namespace {

void check_moreau_invariants(const ConeSpec& k, const Eigen::VectorXd& x, const MoreauParts& p) {
  CHECK((x - (p.plus - p.minus)).norm() <= 1e-9);
  CHECK(std::abs(p.plus.dot(p.minus)) <= 1e-9);
  CHECK(contains(k, p.plus, 1e-9));
  CHECK(contains(k, p.minus, 1e-9));  // self-dual: K* = K
  CHECK((p.abs - (p.plus + p.minus)).norm() <= 1e-12);
}

}  // namespace

TEST_CASE("membership basics") {
  const ConeSpec l3 = ConeSpec::lorentz(3);
  CHECK(contains(l3, Eigen::Vector3d(1.0, 0.5, 0.0), 0.0));
  CHECK(!contains(l3, Eigen::Vector3d(0.5, 1.0, 0.0), 0.0));
  CHECK(strictly_contains(l3, Eigen::Vector3d(1.0, 0.5, 0.0), 0.4));

  const ConeSpec o3 = ConeSpec::orthant(3);
  CHECK(contains(o3, Eigen::Vector3d(0.0, 1.0, 2.0), 0.0));
  CHECK(!contains(o3, Eigen::Vector3d(-0.1, 1.0, 2.0), 0.0));

  // Elliptic with axis e1 and weights (4,4): margin 1 - sqrt(4*0.16) = 0.2.
  Eigen::MatrixXd basis(3, 2);
  basis << 0, 0, 1, 0, 0, 1;
  const ConeSpec ell = ConeSpec::elliptic(Eigen::Vector3d(1, 0, 0), basis,
                                          Eigen::Vector2d(4.0, 4.0));
  CHECK(margin(ell, Eigen::Vector3d(1.0, 0.4, 0.0)) == doctest::Approx(0.2));
  CHECK(contains(ell, Eigen::Vector3d(1.0, 0.4, 0.0), 0.0));

  CHECK_THROWS_AS(margin(l3, Eigen::Vector2d(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("negated cone membership mirrors the base cone") {
  const ConeSpec neg = ConeSpec::orthant(3).negated();
  CHECK(contains(neg, Eigen::Vector3d(-1.0, -2.0, 0.0), 0.0));
  CHECK(!contains(neg, Eigen::Vector3d(1.0, -2.0, 0.0), 0.0));
  CHECK(margin(neg, Eigen::Vector3d(-1.0, -2.0, -3.0)) ==
        doctest::Approx(margin(ConeSpec::orthant(3), Eigen::Vector3d(1.0, 2.0, 3.0))));
}

TEST_CASE("dual membership: self-dual cones") {
  const ConeSpec l3 = ConeSpec::lorentz(3);
  CHECK(dual_contains(l3, Eigen::Vector3d(1.0, 0.0, 0.0), 1e-12) == Ternary::Yes);
  const ConeSpec o3 = ConeSpec::orthant(3);
  CHECK(dual_contains(o3, Eigen::Vector3d(1.0, -0.1, 0.0), 1e-12) == Ternary::No);
}

TEST_CASE("dual membership: elliptic against the closed-form dual") {
  Eigen::MatrixXd basis(3, 2);
  basis << 0, 0, 1, 0, 0, 1;
  const ConeSpec ell = ConeSpec::elliptic(Eigen::Vector3d(1, 0, 0), basis,
                                          Eigen::Vector2d(4.0, 4.0));
  CHECK(dual_contains(ell, Eigen::Vector3d(1.0, 0.0, 0.0), 1e-9) == Ternary::Yes);

  // Cross-check a batch of queries against the reciprocal-weights dual cone.
  Rng rng(31);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const Eigen::VectorXd y = rng.normal_vector(3);
    const double closed_margin =
        y[0] - std::sqrt(0.25 * y[1] * y[1] + 0.25 * y[2] * y[2]);
    if (std::abs(closed_margin) < 1e-3) continue;  // skip knife-edge queries
    const Ternary got = dual_contains(ell, y, 1e-9);
    const bool expected = sqc::testing::elliptic_dual_closed_form(ell, y, 0.0);
    CHECK(got == (expected ? Ternary::Yes : Ternary::No));
    ++checked;
  }
  CHECK(checked >= 25);
}

TEST_CASE("lorentz projection: spec values") {
  {
    const MoreauParts p = project_lorentz(Eigen::Vector3d(0.0, 1.0, 0.0));
    CHECK(p.plus.isApprox(Eigen::Vector3d(0.5, 0.5, 0.0)));
    CHECK(p.minus.isApprox(Eigen::Vector3d(0.5, -0.5, 0.0)));
  }
  {
    const MoreauParts p = project_lorentz(Eigen::Vector3d(2.0, 1.0, 0.0));
    CHECK(p.plus == Eigen::Vector3d(2.0, 1.0, 0.0));
    CHECK(p.minus.isZero(0.0));
  }
  {
    const MoreauParts p = project_lorentz(Eigen::Vector3d(-2.0, 1.0, 0.0));
    CHECK(p.plus.isZero(0.0));
    CHECK(p.minus == Eigen::Vector3d(2.0, -1.0, 0.0));
  }
}

TEST_CASE("lorentz projection agrees with the independent oracle") {
  Rng rng(513);
  for (int n : {3, 5}) {
    for (int rep = 0; rep < 80; ++rep) {
      const Eigen::VectorXd x = 2.0 * rng.normal_vector(n);
      const MoreauParts p = project_lorentz(x);
      const Eigen::VectorXd oracle = sqc::testing::lorentz_projection_oracle(x);
      CHECK((p.plus - oracle).norm() <= 1e-6 * (1.0 + x.norm()));
      // Optimality: the oracle never beats the closed form.
      CHECK((x - p.plus).norm() <= (x - oracle).norm() + 1e-9);
    }
  }
}

TEST_CASE("lorentz absolute value") {
  CHECK(abs_lorentz(Eigen::Vector3d(1.0, 2.0, 0.0)).isApprox(Eigen::Vector3d(2.0, 1.0, 0.0)));
  CHECK(abs_lorentz(Eigen::Vector3d(3.0, 1.0, 0.0)) == Eigen::Vector3d(3.0, 1.0, 0.0));
  CHECK(abs_lorentz(Eigen::Vector3d(0.0, 0.0, 1.0)).isApprox(Eigen::Vector3d(1.0, 0.0, 0.0)));
  // x_rest = 0 limit case.
  CHECK(abs_lorentz(Eigen::Vector2d(-3.0, 0.0)) == Eigen::Vector2d(3.0, 0.0));
  CHECK_THROWS_AS(abs_lorentz(Eigen::Vector3d::Zero()), std::invalid_argument);

  Rng rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 4;
    const Eigen::VectorXd x = rng.normal_vector(n);
    const MoreauParts p = project_lorentz(x);
    CHECK((abs_lorentz(x) - (p.plus + p.minus)).norm() <= 1e-9);
  }
}

TEST_CASE("moreau decomposition invariants across cones") {
  Rng rng(2718);
  for (int n : {2, 3, 5, 8}) {
    const ConeSpec cones[2] = {ConeSpec::orthant(n), ConeSpec::lorentz(n)};
    for (const ConeSpec& k : cones) {
      for (int rep = 0; rep < 1000; ++rep) {
        const Eigen::VectorXd x = 3.0 * rng.normal_vector(n);
        check_moreau_invariants(k, x, moreau_decompose(k, x));
      }
    }
  }
  // Orthant spot values.
  const MoreauParts p = moreau_decompose(ConeSpec::orthant(3), Eigen::Vector3d(1.0, -2.0, 0.0));
  CHECK(p.plus == Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(p.minus == Eigen::Vector3d(0.0, 2.0, 0.0));
  const MoreauParts q = moreau_decompose(ConeSpec::orthant(2), Eigen::Vector2d(3.0, 4.0));
  CHECK(q.plus == Eigen::Vector2d(3.0, 4.0));
  CHECK(q.minus.isZero(0.0));

  Eigen::MatrixXd basis(3, 2);
  basis << 0, 0, 1, 0, 0, 1;
  const ConeSpec ell =
      ConeSpec::elliptic(Eigen::Vector3d(1, 0, 0), basis, Eigen::Vector2d(1.0, 1.0));
  CHECK_THROWS_AS(moreau_decompose(ell, Eigen::Vector3d(1, 0, 0)), UnsupportedCone);
}

TEST_CASE("self-duality of membership for orthant and lorentz") {
  Rng rng(41);
  for (const ConeSpec& k : {ConeSpec::orthant(4), ConeSpec::lorentz(4)}) {
    for (int rep = 0; rep < 10000; ++rep) {
      const Eigen::VectorXd x = rng.normal_vector(4);
      CHECK(contains(k, x, 1e-12) == (dual_contains(k, x, 1e-12) == Ternary::Yes));
    }
  }
}

TEST_CASE("level cone weights") {
  auto dec_from = [](const Eigen::Vector3d& lam) {
    return spectral_decompose(SymmetricMatrix(Eigen::MatrixXd(lam.asDiagonal())), 1e-8);
  };
  {
    const ConeSpec lc = elliptic_levelcone(dec_from({0.0, 1.0, 2.0}), 1.0);
    CHECK(lc.weights()[0] == doctest::Approx(0.0));
    CHECK(lc.weights()[1] == doctest::Approx(1.0));
    CHECK(lc.degenerate());
  }
  {
    const ConeSpec lc = elliptic_levelcone(dec_from({0.0, 2.0, 2.0}), 1.0);
    CHECK(lc.weights().isApprox(Eigen::Vector2d(1.0, 1.0)));
    CHECK(!lc.degenerate());
  }
  {
    const ConeSpec lc = elliptic_levelcone(dec_from({0.0, 1.0, 3.0}), 0.5);
    CHECK(lc.weights().isApprox(Eigen::Vector2d(1.0, 5.0)));
  }
  const SpectralDecomposition dec = dec_from({0.0, 1.0, 3.0});
  CHECK_THROWS_AS(elliptic_levelcone(dec, 0.0), std::domain_error);
  CHECK_THROWS_AS(elliptic_levelcone(dec, 1.5), std::domain_error);
}

TEST_CASE("level cones grow with c") {
  // theta_i(c) decreases in c, so L_c is contained in L_{c'} for c < c'.
  const SymmetricMatrix a(Eigen::MatrixXd(Eigen::Vector4d(0.0, 1.5, 2.0, 4.0).asDiagonal()));
  const SpectralDecomposition dec = spectral_decompose(a, 1e-8);
  const ConeSpec smaller = elliptic_levelcone(dec, 0.4);
  const ConeSpec larger = elliptic_levelcone(dec, 1.2);
  Rng rng(5);
  long members = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const Eigen::VectorXd x = rng.normal_vector(4);
    if (contains(smaller, x, 0.0)) {
      ++members;
      CHECK(contains(larger, x, 1e-12));
    }
  }
  CHECK(members > 100);
}

TEST_CASE("w-dual membership on the diag(0,1,3) construction") {
  const SymmetricMatrix a(Eigen::MatrixXd(Eigen::Vector3d(0.0, 1.0, 3.0).asDiagonal()));
  const SpectralDecomposition dec = spectral_decompose(a, 1e-8);
  const WConeSpec w = WConeSpec::make(dec, ConeSpec::lorentz(3));
  const Eigen::VectorXd v1 = dec.v(0);  // e1

  const WDualOutcome yes = w_dual_contains(w, v1, 2000, 1e-8, 42);
  CHECK(yes.status == Ternary::Yes);

  const WDualOutcome no = w_dual_contains(w, Eigen::VectorXd(-v1), 2000, 1e-8, 42);
  CHECK(no.status == Ternary::No);
  REQUIRE(no.witness.has_value());
  // The witness re-verifies: strictly inside K, inside a level branch.
  CHECK(margin(w.base_cone, *no.witness) > 0.0);
  CHECK((margin(w.level_cone, *no.witness) >= 0.0 ||
         margin(w.level_cone, Eigen::VectorXd(-*no.witness)) >= 0.0));

  const WDualOutcome zero = w_dual_contains(w, Eigen::VectorXd::Zero(3), 500, 1e-8, 42);
  CHECK(zero.status == Ternary::Yes);
}

TEST_CASE("intersection triviality") {
  const ConeSpec o3 = ConeSpec::orthant(3);
  {
    const IntersectionResult r = intersection_trivial(o3, o3.negated(), 48, 1e-8, 42);
    CHECK(r.status == IntersectionStatus::Trivial);
  }
  {
    const ConeSpec l3 = ConeSpec::lorentz(3);
    const IntersectionResult r = intersection_trivial(l3, l3, 48, 1e-8, 42);
    CHECK(r.status == IntersectionStatus::Nontrivial);
    REQUIRE(r.witness.has_value());
    CHECK(margin(l3, *r.witness) >= 0.0);
  }
  {
    Eigen::MatrixXd basis(3, 2);
    basis << 0, 0, 1, 0, 0, 1;
    const ConeSpec ell = ConeSpec::elliptic(Eigen::Vector3d(-1, 0, 0), basis,
                                            Eigen::Vector2d(1.0, 1.0));
    const IntersectionResult r = intersection_trivial(o3, ell, 48, 1e-8, 42);
    CHECK(r.status == IntersectionStatus::Trivial);
  }
}

TEST_CASE("cap samplers respect their margins") {
  Rng rng(8);
  Eigen::MatrixXd basis(3, 2);
  basis << 0, 0, 1, 0, 0, 1;
  const ConeSpec cones[3] = {ConeSpec::orthant(3), ConeSpec::lorentz(3),
                             ConeSpec::elliptic(Eigen::Vector3d(1, 0, 0), basis,
                                                Eigen::Vector2d(2.0, 0.5))};
  for (const ConeSpec& k : cones) {
    for (int rep = 0; rep < 300; ++rep) {
      const Eigen::VectorXd x = sample_cap(k, rng, 1e-9);
      CHECK(std::abs(x.norm() - 1.0) <= 1e-12);
      CHECK(margin(k, x) > 1e-9);
      const Eigen::VectorXd b = sample_cap_near_boundary(k, rng, 0.05);
      CHECK(margin(k, b) > 0.0);
      CHECK(margin(k, b) < 0.05);
    }
  }
}
