#include "hf/positive_maps.hpp"
#include "hf/random.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hf;
using doctest::Approx;

namespace {

PositiveLinearMap map2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return PositiveLinearMap(m);
}

const PositiveLinearMap kMixing = map2(2, 1, 1, 2);
const PositiveLinearMap kRankOne = map2(1, 2, 2, 4);
const PositiveLinearMap kIdentity = map2(1, 0, 0, 1);

}  // namespace

TEST_CASE("apply map") {
  auto y = apply_map(kMixing, {1, 2});
  CHECK(y[0] == 4.0);
  CHECK(y[1] == 5.0);
  y = apply_map(kIdentity, {3, 7});
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 7.0);
  y = apply_map(map2(1, 1, 1, 1), {2, 3});
  CHECK(y[0] == 5.0);
  CHECK(y[1] == 5.0);
  CHECK_THROWS_AS(apply_map(kMixing, {1, 2, 3}), DimensionMismatch);
}

TEST_CASE("map validation") {
  CHECK_THROWS_AS(map2(1, -1, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(map2(0, 0, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(map2(1, NAN, 1, 1), InvalidArgument);
  CHECK_NOTHROW(map2(1, 0, 1, 0));
}

TEST_CASE("projective diameter examples") {
  CHECK(projective_diameter(kMixing).value() == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(oracle::cross_ratio_diameter(kMixing.matrix()) == Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(projective_diameter(kRankOne).value() == Approx(0.0));
  CHECK(projective_diameter(kIdentity).is_infinite());
}

TEST_CASE("birkhoff coefficient examples") {
  CHECK(birkhoff_coefficient(kMixing) == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(birkhoff_coefficient(kRankOne) == Approx(0.0));
  CHECK(birkhoff_coefficient(kIdentity) == 1.0);
  CHECK(birkhoff_coefficient(ExtendedDistance::infinite()) == 1.0);
}

TEST_CASE("projective diameter matches exhaustive cross ratios") {
  Rng rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rows = rng.integer(1, 7);
    const auto cols = rng.integer(1, 7);
    Eigen::MatrixXd a = testing::positive_matrix(rng, rows, cols, 2.0);
    // Sprinkle zeros into some instances, keeping every row nonzero.
    if (trial % 3 == 0) {
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          if (rng.uniform() < 0.25 && j != i % cols) a(i, j) = 0.0;
    }
    const double expected = oracle::cross_ratio_diameter(a);
    const auto got = projective_diameter(PositiveLinearMap(a));
    CAPTURE(a);
    if (std::isinf(expected)) {
      CHECK(got.is_infinite());
    } else {
      REQUIRE(got.is_finite());
      CHECK(got.value() == Approx(expected).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("nonnegative maps never expand the metric") {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = rng.integer(2, 8);
    Eigen::MatrixXd a = testing::positive_matrix(rng, n, n, 2.0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (rng.uniform() < 0.4 && j != i) a(i, j) = 0.0;
    const PositiveLinearMap map(a);
    const auto x = testing::positive_vector(rng, n);
    const auto y = testing::positive_vector(rng, n);
    const double before = hilbert_distance_orthant(x, y).value();
    const double after = hilbert_distance_orthant(apply_map(map, x), apply_map(map, y)).value();
    CHECK(after <= before * (1.0 + 1e-12) + 1e-15);
    CHECK(after <= birkhoff_coefficient(map) * before * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("birkhoff coefficient is submultiplicative") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = rng.integer(2, 6);
    const PositiveLinearMap a(testing::positive_matrix(rng, n, n));
    const PositiveLinearMap b(testing::positive_matrix(rng, n, n));
    const PositiveLinearMap ab(a.matrix() * b.matrix());
    CHECK(birkhoff_coefficient(ab) <= birkhoff_coefficient(a) * birkhoff_coefficient(b) + 1e-12);
  }
}

TEST_CASE("iterates of a strictly positive map converge geometrically to one ray") {
  Rng rng(13);
  const PositiveLinearMap a(testing::positive_matrix(rng, 4, 4));
  const double k = birkhoff_coefficient(a);
  REQUIRE(k < 1.0);
  ConeVector x = testing::positive_vector(rng, 4);
  ConeVector y = testing::positive_vector(rng, 4);
  const double d0 = hilbert_distance_orthant(x, y).value();
  for (int step = 1; step <= 12; ++step) {
    x = apply_map(a, x).normalized();
    y = apply_map(a, y).normalized();
    CHECK(hilbert_distance_orthant(x, y).value() <= std::pow(k, step) * d0 * (1.0 + 1e-9) + 1e-14);
  }
}

TEST_CASE("empirical contraction ratio") {
  const auto ident = empirical_contraction_ratio(kIdentity, 1000, 5);
  CHECK(ident.observed_max_ratio == Approx(1.0).epsilon(1e-12));
  CHECK(ident.birkhoff_bound == 1.0);

  const auto mixing = empirical_contraction_ratio(kMixing, 1000, 42);
  CHECK(mixing.observed_max_ratio <= 1.0 / 3.0 + 1e-9);
  CHECK(mixing.birkhoff_bound == Approx(1.0 / 3.0));
  CHECK(mixing.seed == 42);
  CHECK(mixing.trials == 1000);

  CHECK(empirical_contraction_ratio(kRankOne, 100, 9).observed_max_ratio == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(empirical_contraction_ratio(kMixing, 0, 1), InvalidArgument);

  const auto again = empirical_contraction_ratio(kMixing, 1000, 42);
  CHECK(again.observed_max_ratio == mixing.observed_max_ratio);
}

TEST_CASE("witnessed pair stays under the birkhoff bound") {
  const ConeVector x{1, 2};
  const ConeVector y{2, 1};
  const double ratio = hilbert_distance_orthant(apply_map(kMixing, x), apply_map(kMixing, y)).value() /
                       hilbert_distance_orthant(x, y).value();
  CHECK(ratio == Approx(std::log(25.0 / 16.0) / std::log(4.0)).epsilon(1e-14));
  CHECK(ratio < birkhoff_coefficient(kMixing));
}
