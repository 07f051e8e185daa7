#pragma once

// Gaussian conditioning and marginalization under a linear-Gaussian channel
//   x ~ N(mu_X, Sigma_X),  y | x ~ N(A x + b, Sigma_{Y|X}).

#include "hf/cone_geometry.hpp"

#include <Eigen/Dense>

namespace hf::gauss {

class GaussianDist {
 public:
  GaussianDist(Eigen::VectorXd mean, SpdMatrix covariance);

  Eigen::Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const SpdMatrix& covariance() const { return covariance_; }

 private:
  Eigen::VectorXd mean_;
  SpdMatrix covariance_;
};

/// p(y) = N(A mu_X + b, Sigma_{Y|X} + A Sigma_X A^T).
GaussianDist linear_marginal(const GaussianDist& prior, const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& b, const SpdMatrix& noise_cov);

/// p(x | y) in information form:
///   Sigma_{X|Y} = (Sigma_X^{-1} + A^T Sigma_{Y|X}^{-1} A)^{-1}
///   mu_{X|Y}    = Sigma_{X|Y} [A^T Sigma_{Y|X}^{-1} (y - b) + Sigma_X^{-1} mu_X]
GaussianDist linear_conditional(const GaussianDist& prior, const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b, const SpdMatrix& noise_cov,
                                const Eigen::VectorXd& y);

double log_density(const GaussianDist& dist, const Eigen::VectorXd& x);

/// Hilbert distance between the two densities as elements of the cone of
/// positive functions on R^n: 0 when the parameters agree to `tol`
/// (relative), infinite otherwise since one density ratio is unbounded.
ExtendedDistance gaussian_hilbert_comparability(const GaussianDist& f, const GaussianDist& g,
                                                double tol = 1e-12);

}  // namespace hf::gauss
