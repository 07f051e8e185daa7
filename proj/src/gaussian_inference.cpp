#include "hf/gaussian_inference.hpp"

#include <cmath>
#include <numbers>

namespace hf::gauss {

GaussianDist::GaussianDist(Eigen::VectorXd mean, SpdMatrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (mean_.size() != covariance_.size()) throw DimensionMismatch("gaussian: mean and covariance sizes differ");
  if (!mean_.allFinite()) throw InvalidArgument("gaussian: mean has a non-finite entry");
}

namespace {

void check_channel(const GaussianDist& prior, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                   const SpdMatrix& noise_cov) {
  if (a.cols() != prior.dim()) throw DimensionMismatch("channel matrix columns must match prior dimension");
  if (a.rows() != b.size()) throw DimensionMismatch("channel matrix rows must match offset dimension");
  if (noise_cov.size() != b.size()) throw DimensionMismatch("noise covariance must match offset dimension");
}

}  // namespace

GaussianDist linear_marginal(const GaussianDist& prior, const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& b, const SpdMatrix& noise_cov) {
  check_channel(prior, a, b, noise_cov);
  Eigen::MatrixXd cov = noise_cov.matrix() + a * prior.covariance().matrix() * a.transpose();
  return GaussianDist(a * prior.mean() + b, SpdMatrix(cov, "marginal covariance"));
}

GaussianDist linear_conditional(const GaussianDist& prior, const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b, const SpdMatrix& noise_cov,
                                const Eigen::VectorXd& y) {
  check_channel(prior, a, b, noise_cov);
  if (y.size() != b.size()) throw DimensionMismatch("observation must match offset dimension");

  const auto noise_llt = noise_cov.cholesky();
  const Eigen::MatrixXd noise_inv_a = noise_llt.solve(a);
  const Eigen::MatrixXd prior_precision = prior.covariance().inverse();

  Eigen::MatrixXd precision = prior_precision + a.transpose() * noise_inv_a;
  precision = 0.5 * (precision + precision.transpose());
  const Eigen::LLT<Eigen::MatrixXd> precision_llt(precision);
  if (precision_llt.info() != Eigen::Success) throw NotPositiveDefinite("posterior precision not positive definite");

  const Eigen::VectorXd info = noise_inv_a.transpose() * (y - b) + prior_precision * prior.mean();
  Eigen::VectorXd mean = precision_llt.solve(info);
  const Eigen::MatrixXd cov = precision_llt.solve(Eigen::MatrixXd::Identity(prior.dim(), prior.dim()));
  return GaussianDist(std::move(mean), SpdMatrix(cov, "posterior covariance"));
}

double log_density(const GaussianDist& dist, const Eigen::VectorXd& x) {
  if (x.size() != dist.dim()) throw DimensionMismatch("log_density: dimension mismatch");
  const auto llt = dist.covariance().cholesky();
  const Eigen::VectorXd z = llt.matrixL().solve(x - dist.mean());
  const double n = static_cast<double>(dist.dim());
  return -0.5 * z.squaredNorm() - 0.5 * (n * std::log(2.0 * std::numbers::pi) + dist.covariance().log_det());
}

ExtendedDistance gaussian_hilbert_comparability(const GaussianDist& f, const GaussianDist& g, double tol) {
  if (f.dim() != g.dim()) throw DimensionMismatch("comparability: dimension mismatch");
  const double mean_scale = 1.0 + std::max(f.mean().lpNorm<Eigen::Infinity>(), g.mean().lpNorm<Eigen::Infinity>());
  const double cov_scale = std::max(f.covariance().matrix().lpNorm<Eigen::Infinity>(),
                                    g.covariance().matrix().lpNorm<Eigen::Infinity>());
  const bool same_mean = (f.mean() - g.mean()).lpNorm<Eigen::Infinity>() <= tol * mean_scale;
  const bool same_cov =
      (f.covariance().matrix() - g.covariance().matrix()).lpNorm<Eigen::Infinity>() <= tol * cov_scale;
  // Normalized densities: proportional means equal, and then the distance is 0.
  // Any parameter difference makes log(f/g) an unbounded quadratic (or linear)
  // function, so sup f/g * sup g/f diverges.
  if (same_mean && same_cov) return ExtendedDistance::finite(0.0);
  return ExtendedDistance::infinite();
}

}  // namespace hf::gauss
