#include "hf/cone_geometry.hpp"
#include "hf/random.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hf;
using doctest::Approx;

namespace {

Eigen::MatrixXd diag(double a, double b) { return Eigen::Vector2d(a, b).asDiagonal(); }

}  // namespace

TEST_CASE("order bounds") {
  auto b = order_bounds_orthant({1, 2}, {2, 1});
  CHECK(b.max_ratio == 2.0);
  CHECK(b.min_ratio == 0.5);
  b = order_bounds_orthant({3, 3}, {3, 3});
  CHECK(b.max_ratio == 1.0);
  CHECK(b.min_ratio == 1.0);
  b = order_bounds_orthant({1, 2, 4}, {2, 2, 2});
  CHECK(b.max_ratio == 2.0);
  CHECK(b.min_ratio == 0.5);
  CHECK_THROWS_AS(order_bounds_orthant({1, 2}, {1, 2, 3}), DimensionMismatch);
}

TEST_CASE("orthant distance examples") {
  CHECK(hilbert_distance_orthant({1, 2}, {2, 1}).value() == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(hilbert_distance_orthant({1, 2}, {3, 6}).value() == Approx(0.0));
  CHECK(hilbert_distance_orthant({1, 2, 4}, {2, 2, 2}).value() == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(hilbert_distance_orthant({1, 0}, {1, 1}), ConeMembershipError);
}

TEST_CASE("cone vector membership") {
  CHECK_THROWS_AS(ConeVector({1.0, -1.0}), ConeMembershipError);
  CHECK_THROWS_AS(ConeVector({0.0, 0.0}), ConeMembershipError);
  CHECK_THROWS_AS(ConeVector({1.0, NAN}), ConeMembershipError);
  CHECK_THROWS(ConeVector(Eigen::VectorXd(0)));
  CHECK(ConeVector({1.0, 0.0}).is_interior() == false);
  const auto n = ConeVector({1.0, 3.0}).normalized();
  CHECK(n[0] == Approx(0.25));
  CHECK(n[1] == Approx(0.75));
}

TEST_CASE("spd distance examples") {
  const SpdMatrix i2 = SpdMatrix::identity(2);
  CHECK(hilbert_distance_spd(SpdMatrix(diag(1, 4)), i2).value() == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(hilbert_distance_spd(i2, SpdMatrix(7.0 * Eigen::MatrixXd::Identity(2, 2))).value() ==
        Approx(0.0).epsilon(1e-14));
  CHECK(thompson_distance_spd(SpdMatrix(diag(1, 4)), i2) == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(thompson_distance_spd(i2, SpdMatrix(2.0 * Eigen::MatrixXd::Identity(2, 2))) ==
        Approx(std::log(2.0)).epsilon(1e-14));

  Rng rng(11);
  const SpdMatrix x = testing::spd(rng, 4);
  CHECK(hilbert_distance_spd(x, x).value() == Approx(0.0).epsilon(1e-12));
  CHECK(thompson_distance_spd(x, x) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spd construction validates symmetry and definiteness") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0.5, 0.0, 1;
  CHECK_THROWS_AS(SpdMatrix{a}, NotPositiveDefinite);
  CHECK_THROWS_WITH_AS(SpdMatrix(diag(1, -1), "Gamma"), "Gamma not positive definite", NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(diag(1, 0)), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(Eigen::MatrixXd(2, 3)), DimensionMismatch);
}

TEST_CASE("measure distance examples") {
  CHECK(hilbert_distance_measures({0.5, 0.5}, {0.8, 0.2}).value() == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(hilbert_distance_measures({1, 0}, {0.5, 0.5}).is_infinite());
  CHECK(hilbert_distance_measures({0.3, 0.7}, {0.3, 0.7}).value() == 0.0);
  // Equal supports with a shared zero.
  CHECK(hilbert_distance_measures({0.5, 0.0, 0.5}, {0.2, 0.0, 0.8}).value() == Approx(std::log(4.0)));
}

TEST_CASE("extended distance") {
  CHECK(ExtendedDistance::infinite() == ExtendedDistance::infinite());
  CHECK_FALSE(ExtendedDistance::finite(1.0) == ExtendedDistance::infinite());
  CHECK_THROWS_AS(ExtendedDistance::infinite().value(), InvalidArgument);
  CHECK(ExtendedDistance::infinite().value_or(-1.0) == -1.0);
}

TEST_CASE("orthant metric properties against the loop oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = rng.integer(1, 12);
    const auto x = testing::positive_vector(rng, n);
    const auto y = testing::positive_vector(rng, n);
    const auto z = testing::positive_vector(rng, n);
    const double dxy = hilbert_distance_orthant(x, y).value();
    CHECK(dxy == Approx(oracle::orthant_distance(x.entries(), y.entries())).epsilon(1e-13));
    CHECK(dxy == Approx(hilbert_distance_orthant(y, x).value()).epsilon(1e-13));
    CHECK(dxy >= 0.0);
    const double dxz = hilbert_distance_orthant(x, z).value();
    const double dzy = hilbert_distance_orthant(z, y).value();
    CHECK(dxy <= dxz + dzy + 1e-12);

    const double lambda = std::exp(rng.uniform(-13.8, 13.8));
    const double mu = std::exp(rng.uniform(-13.8, 13.8));
    const ConeVector xs(lambda * x.entries());
    const ConeVector ys(mu * y.entries());
    CHECK(std::abs(hilbert_distance_orthant(xs, ys).value() - dxy) <= 1e-12);
    CHECK(hilbert_distance_orthant(xs, x).value() <= 1e-12);
  }
}

TEST_CASE("measure distance agrees with the orthant distance on interior points") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = rng.integer(1, 8);
    const auto x = testing::positive_vector(rng, n);
    const auto y = testing::positive_vector(rng, n);
    CHECK(hilbert_distance_measures(x, y).value() == Approx(hilbert_distance_orthant(x, y).value()).epsilon(1e-14));
  }
}

TEST_CASE("spd metrics against the general eigensolver oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = rng.integer(1, 6);
    const SpdMatrix x = testing::spd(rng, n);
    const SpdMatrix y = testing::spd(rng, n);
    const SpdMatrix z = testing::spd(rng, n);
    const double dh = hilbert_distance_spd(x, y).value();
    const double dt = thompson_distance_spd(x, y);
    CHECK(dh == Approx(oracle::spd_hilbert(x.matrix(), y.matrix())).epsilon(1e-9));
    CHECK(dt == Approx(oracle::spd_thompson(x.matrix(), y.matrix())).epsilon(1e-9));
    CHECK(dh == Approx(hilbert_distance_spd(y, x).value()).epsilon(1e-10));
    CHECK(dt == Approx(thompson_distance_spd(y, x)).epsilon(1e-10));
    CHECK(dh <= hilbert_distance_spd(x, z).value() + hilbert_distance_spd(z, y).value() + 1e-10);
    CHECK(dt <= thompson_distance_spd(x, z) + thompson_distance_spd(z, y) + 1e-10);
    CHECK(dt >= dh / 2.0 - 1e-12);

    const double lambda = std::exp(rng.uniform(-13.8, 13.8));
    const double mu = std::exp(rng.uniform(-13.8, 13.8));
    CHECK(std::abs(hilbert_distance_spd(SpdMatrix(lambda * x.matrix()), SpdMatrix(mu * y.matrix())).value() - dh) <=
          1e-12);
    CHECK(thompson_distance_spd(SpdMatrix(lambda * x.matrix()), x) == Approx(std::abs(std::log(lambda))).epsilon(1e-10));
  }
}

TEST_CASE("diagonal spd matrices reduce to the orthant metric") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = rng.integer(1, 6);
    const auto x = testing::positive_vector(rng, n);
    const auto y = testing::positive_vector(rng, n);
    const SpdMatrix xd(Eigen::MatrixXd(x.entries().asDiagonal()));
    const SpdMatrix yd(Eigen::MatrixXd(y.entries().asDiagonal()));
    CHECK(hilbert_distance_spd(xd, yd).value() == Approx(hilbert_distance_orthant(x, y).value()).epsilon(1e-12));
  }
}

TEST_CASE("relative spectrum is ascending and matches the product eigenvalues") {
  Rng rng(5);
  const SpdMatrix x = testing::spd(rng, 5);
  const SpdMatrix y = testing::spd(rng, 5);
  const Eigen::VectorXd ev = relative_spectrum(x, y);
  const auto ref = oracle::product_eigenvalues(x.matrix(), y.matrix());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (i > 0) CHECK(ev[i] >= ev[i - 1]);
    CHECK(ev[i] == Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-10));
  }
}
