#pragma once

// Hilbert and Thompson metrics on three cones: the positive orthant, the cone
// of symmetric positive definite matrices, and finite measures on a finite set.
// All distances use the natural logarithm.

#include "hf/error.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>

namespace hf {

/// Smallest admissible eigenvalue, relative to the largest one.
inline constexpr double kPdFloor = 1e-12;
/// Largest admissible relative Frobenius asymmetry ||X - X^T|| / ||X||.
inline constexpr double kSymTol = 1e-9;

/// A distance that may be infinite (non-comparable elements).
class ExtendedDistance {
 public:
  static ExtendedDistance finite(double value);
  static ExtendedDistance infinite() { return ExtendedDistance{}; }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }

  /// Throws InvalidArgument when infinite.
  double value() const;
  double value_or(double fallback) const { return value_.value_or(fallback); }

  friend bool operator==(const ExtendedDistance&, const ExtendedDistance&) = default;

 private:
  ExtendedDistance() = default;
  std::optional<double> value_;
};

/// A nonzero vector in the closed positive orthant. Interior membership
/// (every entry > 0) is checked by the operations that need it.
class ConeVector {
 public:
  explicit ConeVector(Eigen::VectorXd entries);
  ConeVector(std::initializer_list<double> entries);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.size()); }
  const Eigen::VectorXd& entries() const { return entries_; }
  std::span<const double> span() const { return {entries_.data(), dim()}; }
  double operator[](std::size_t i) const { return entries_[static_cast<Eigen::Index>(i)]; }

  bool is_interior() const;
  double total() const;
  /// Rescaled copy summing to one.
  ConeVector normalized() const;

 private:
  Eigen::VectorXd entries_;
};

/// Symmetric positive definite matrix. Construction symmetrizes inputs that
/// are symmetric to kSymTol and rejects anything with an eigenvalue at or
/// below kPdFloor * lambda_max.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Eigen::MatrixXd& m, std::string_view name = "matrix");

  static SpdMatrix identity(Eigen::Index n);
  static SpdMatrix scalar(double value);

  Eigen::Index size() const { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  Eigen::LLT<Eigen::MatrixXd> cholesky() const { return Eigen::LLT<Eigen::MatrixXd>(m_); }
  Eigen::MatrixXd inverse() const;
  double log_det() const;

 private:
  Eigen::MatrixXd m_;
};

struct OrderBounds {
  double max_ratio;  // M(x, y)
  double min_ratio;  // m(x, y)
};

OrderBounds order_bounds_orthant(const ConeVector& x, const ConeVector& y);

/// log(M/m). Both arguments must be interior points.
ExtendedDistance hilbert_distance_orthant(const ConeVector& x, const ConeVector& y);

/// Eigenvalues of X Y^{-1} in ascending order, via the whitened symmetric
/// matrix L^{-1} X L^{-T} with Y = L L^T.
Eigen::VectorXd relative_spectrum(const SpdMatrix& x, const SpdMatrix& y);

ExtendedDistance hilbert_distance_spd(const SpdMatrix& x, const SpdMatrix& y);

/// max_i |log lambda_i(X Y^{-1})|. Not projective.
double thompson_distance_spd(const SpdMatrix& x, const SpdMatrix& y);

/// Measures on a finite set. Infinite unless the supports coincide; on a
/// common support this is the orthant distance restricted to it.
ExtendedDistance hilbert_distance_measures(const ConeVector& mu, const ConeVector& mu_prime);

}  // namespace hf
