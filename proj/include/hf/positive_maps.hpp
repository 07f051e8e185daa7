#pragma once

// Nonnegative matrices acting on the positive orthant: projective diameter,
// Birkhoff contraction coefficient and sampled contraction ratios.

#include "hf/cone_geometry.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace hf {

/// Nonnegative m x n matrix without all-zero rows.
class PositiveLinearMap {
 public:
  explicit PositiveLinearMap(Eigen::MatrixXd entries);

  Eigen::Index rows() const { return a_.rows(); }
  Eigen::Index cols() const { return a_.cols(); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  bool is_strictly_positive() const { return (a_.array() > 0.0).all(); }

 private:
  Eigen::MatrixXd a_;
};

ConeVector apply_map(const PositiveLinearMap& a, const ConeVector& x);

/// sup over interior x, y of d_H(Ax, Ay). Equals the largest measure-cone
/// Hilbert distance between two columns of A; infinite as soon as two nonzero
/// columns have different supports.
ExtendedDistance projective_diameter(const PositiveLinearMap& a);

/// tanh(diameter / 4); 1 for an infinite diameter.
double birkhoff_coefficient(const ExtendedDistance& diameter);
double birkhoff_coefficient(const PositiveLinearMap& a);

/// Pairs closer than this are left out of ratio statistics.
inline constexpr double kMinRatioDistance = 1e-9;

struct ContractionReport {
  double observed_max_ratio = 0.0;
  double birkhoff_bound = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// Trials whose input pair was far enough apart to count.
  std::size_t counted = 0;
};

/// Samples pairs with entries exp(U[-3, 3]) and records the largest
/// d_H(Ax, Ay) / d_H(x, y). Trial t draws from Rng::stream(seed, t).
ContractionReport empirical_contraction_ratio(const PositiveLinearMap& a, std::size_t trials,
                                              std::uint64_t seed);

}  // namespace hf
