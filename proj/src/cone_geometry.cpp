#include "hf/cone_geometry.hpp"

#include "hf/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hf {

ExtendedDistance ExtendedDistance::finite(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidArgument("finite distance must be a nonnegative finite number");
  }
  ExtendedDistance d;
  d.value_ = value;
  return d;
}

double ExtendedDistance::value() const {
  if (!value_) throw InvalidArgument("distance is infinite");
  return *value_;
}

ConeVector::ConeVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
  if (entries_.size() < 1) throw ConeMembershipError("cone vector must have dimension >= 1");
  bool any_positive = false;
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    const double v = entries_[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw ConeMembershipError("cone vector entry " + std::to_string(i) +
                                " is negative or not finite");
    }
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw ConeMembershipError("cone vector is identically zero");
}

ConeVector::ConeVector(std::initializer_list<double> entries)
    : ConeVector(Eigen::Map<const Eigen::VectorXd>(entries.begin(),
                                                   static_cast<Eigen::Index>(entries.size()))) {}

bool ConeVector::is_interior() const { return (entries_.array() > 0.0).all(); }

double ConeVector::total() const { return kernels::active().blocked_sum(span()); }

ConeVector ConeVector::normalized() const {
  Eigen::VectorXd out(entries_.size());
  kernels::active().divide(span(), total(), {out.data(), dim()});
  return ConeVector(std::move(out));
}

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& m, std::string_view name) {
  const std::string label(name);
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DimensionMismatch(label + " must be a nonempty square matrix");
  }
  if (!m.allFinite()) throw NotPositiveDefinite(label + " not positive definite (non-finite entry)");
  const double norm = m.norm();
  if (norm == 0.0) throw NotPositiveDefinite(label + " not positive definite");
  if ((m - m.transpose()).norm() > kSymTol * norm) {
    throw NotPositiveDefinite(label + " not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m_, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double hi = ev.maxCoeff();
  const double lo = ev.minCoeff();
  if (!(hi > 0.0) || !(lo > kPdFloor * hi)) {
    throw NotPositiveDefinite(label + " not positive definite");
  }
}

SpdMatrix SpdMatrix::identity(Eigen::Index n) { return SpdMatrix(Eigen::MatrixXd::Identity(n, n)); }

SpdMatrix SpdMatrix::scalar(double value) { return SpdMatrix(Eigen::MatrixXd::Constant(1, 1, value)); }

Eigen::MatrixXd SpdMatrix::inverse() const {
  return cholesky().solve(Eigen::MatrixXd::Identity(size(), size()));
}

double SpdMatrix::log_det() const {
  const Eigen::MatrixXd l = cholesky().matrixL();
  return 2.0 * l.diagonal().array().log().sum();
}

OrderBounds order_bounds_orthant(const ConeVector& x, const ConeVector& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("order bounds: dimension mismatch");
  if (!y.is_interior()) throw ConeMembershipError("order bounds: y must be strictly positive");
  const auto b = kernels::active().ratio_bounds(x.span(), y.span());
  return {b.max_ratio, b.min_ratio};
}

ExtendedDistance hilbert_distance_orthant(const ConeVector& x, const ConeVector& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("hilbert distance: dimension mismatch");
  if (!x.is_interior() || !y.is_interior()) {
    throw ConeMembershipError("hilbert distance: arguments must be strictly positive");
  }
  const auto b = order_bounds_orthant(x, y);
  return ExtendedDistance::finite(std::max(0.0, std::log(b.max_ratio / b.min_ratio)));
}

Eigen::VectorXd relative_spectrum(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.size() != y.size()) throw DimensionMismatch("relative spectrum: size mismatch");
  const auto llt = y.cholesky();
  // W = L^{-1} X L^{-T}
  Eigen::MatrixXd w = llt.matrixL().solve(x.matrix());
  w = llt.matrixL().solve(w.transpose()).transpose();
  w = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

ExtendedDistance hilbert_distance_spd(const SpdMatrix& x, const SpdMatrix& y) {
  const Eigen::VectorXd ev = relative_spectrum(x, y);
  const double hi = ev[ev.size() - 1];
  const double lo = ev[0];
  return ExtendedDistance::finite(std::max(0.0, std::log(hi / lo)));
}

double thompson_distance_spd(const SpdMatrix& x, const SpdMatrix& y) {
  const Eigen::VectorXd ev = relative_spectrum(x, y);
  return std::max(std::abs(std::log(ev[ev.size() - 1])), std::abs(std::log(ev[0])));
}

ExtendedDistance hilbert_distance_measures(const ConeVector& mu, const ConeVector& mu_prime) {
  if (mu.dim() != mu_prime.dim()) throw DimensionMismatch("measure distance: dimension mismatch");
  if (mu.is_interior() && mu_prime.is_interior()) return hilbert_distance_orthant(mu, mu_prime);

  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < mu.dim(); ++i) {
    const bool in_a = mu[i] > 0.0;
    const bool in_b = mu_prime[i] > 0.0;
    if (in_a != in_b) return ExtendedDistance::infinite();
    if (in_a) {
      a.push_back(mu[i]);
      b.push_back(mu_prime[i]);
    }
  }
  const auto bounds = kernels::active().ratio_bounds(a, b);
  return ExtendedDistance::finite(std::max(0.0, std::log(bounds.max_ratio / bounds.min_ratio)));
}

}  // namespace hf
