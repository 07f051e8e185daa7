#include "hf/kalman.hpp"

#include "hf/gaussian_inference.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <cmath>
#include <string>

namespace hf::kalman {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

SpdMatrix named_spd(const Eigen::MatrixXd& m, const char* name) { return SpdMatrix(m, name); }

double scaled_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::ArrayXXd scale = a.array().abs().max(1.0);
  return ((a - b).array().abs() / scale).maxCoeff();
}

}  // namespace

LinearGaussianModel::LinearGaussianModel(Eigen::MatrixXd a, Eigen::MatrixXd c, SpdMatrix gamma,
                                         SpdMatrix sigma, Eigen::VectorXd mu0, SpdMatrix p0)
    : a_(std::move(a)),
      c_(std::move(c)),
      gamma_(std::move(gamma)),
      sigma_(std::move(sigma)),
      mu0_(std::move(mu0)),
      p0_(std::move(p0)) {
  const Eigen::Index n = a_.rows();
  if (n < 1 || a_.cols() != n) throw DimensionMismatch("A must be square and nonempty");
  if (c_.rows() < 1 || c_.cols() != n) throw DimensionMismatch("C must be m x n with n = " + std::to_string(n));
  if (gamma_.size() != n) throw DimensionMismatch("Gamma must be n x n");
  if (sigma_.size() != c_.rows()) throw DimensionMismatch("Sigma must be m x m");
  if (mu0_.size() != n) throw DimensionMismatch("mu0 must have n entries");
  if (p0_.size() != n) throw DimensionMismatch("P0 must be n x n");
  if (!a_.allFinite() || !c_.allFinite() || !mu0_.allFinite()) {
    throw InvalidArgument("model matrices must be finite");
  }
  ct_sinv_ = sigma_.cholesky().solve(c_).transpose();
  ct_sinv_c_ = symmetrized(ct_sinv_ * c_);
}

LinearGaussianModel LinearGaussianModel::from_matrices(Eigen::MatrixXd a, Eigen::MatrixXd c,
                                                       const Eigen::MatrixXd& gamma,
                                                       const Eigen::MatrixXd& sigma, Eigen::VectorXd mu0,
                                                       const Eigen::MatrixXd& p0) {
  return LinearGaussianModel(std::move(a), std::move(c), named_spd(gamma, "Gamma"), named_spd(sigma, "Sigma"),
                             std::move(mu0), named_spd(p0, "P0"));
}

LinearGaussianModel LinearGaussianModel::with_initial(Eigen::VectorXd mu0, SpdMatrix p0) const {
  return LinearGaussianModel(a_, c_, gamma_, sigma_, std::move(mu0), std::move(p0));
}

PredictedState prior_state(const LinearGaussianModel& model) { return {model.mu0(), model.p0(), 0}; }

PredictedState predict(const LinearGaussianModel& model, const CorrectedState& state) {
  if (state.mean.size() != model.state_dim()) throw DimensionMismatch("predict: state dimension mismatch");
  const Eigen::MatrixXd& a = model.a();
  Eigen::MatrixXd p = a * state.covariance.matrix() * a.transpose() + model.gamma().matrix();
  return {a * state.mean, SpdMatrix(symmetrized(p), "predicted covariance"), state.time + 1};
}

CorrectedState correct(const LinearGaussianModel& model, const PredictedState& state,
                       const Eigen::VectorXd& y) {
  if (state.mean.size() != model.state_dim()) throw DimensionMismatch("correct: state dimension mismatch");
  if (y.size() != model.obs_dim()) throw DimensionMismatch("correct: observation dimension mismatch");
  const Eigen::MatrixXd& p = state.covariance.matrix();
  const Eigen::MatrixXd& c = model.c();
  const Eigen::MatrixXd s = symmetrized(c * p * c.transpose() + model.sigma().matrix());
  const Eigen::LLT<Eigen::MatrixXd> s_llt(s);
  // K^T = S^{-1} C P
  const Eigen::MatrixXd gain = s_llt.solve(c * p).transpose();
  Eigen::VectorXd mean = state.mean + gain * (y - c * state.mean);
  Eigen::MatrixXd cov = p - gain * c * p;
  return {std::move(mean), SpdMatrix(symmetrized(cov), "corrected covariance"), state.time};
}

SpdMatrix riccati_map_gain_form(const LinearGaussianModel& model, const SpdMatrix& p) {
  if (p.size() != model.state_dim()) throw DimensionMismatch("riccati map: P has the wrong size");
  const Eigen::MatrixXd& a = model.a();
  const Eigen::MatrixXd& c = model.c();
  const Eigen::MatrixXd m = symmetrized(a * p.matrix() * a.transpose() + model.gamma().matrix());
  const Eigen::MatrixXd s = symmetrized(c * m * c.transpose() + model.sigma().matrix());
  const Eigen::MatrixXd cm = c * m;
  const Eigen::MatrixXd out = m - cm.transpose() * Eigen::LLT<Eigen::MatrixXd>(s).solve(cm);
  return SpdMatrix(symmetrized(out), "riccati iterate");
}

SpdMatrix riccati_map_information_form(const LinearGaussianModel& model, const SpdMatrix& p) {
  if (p.size() != model.state_dim()) throw DimensionMismatch("riccati map: P has the wrong size");
  const Eigen::MatrixXd& a = model.a();
  const SpdMatrix m(symmetrized(a * p.matrix() * a.transpose() + model.gamma().matrix()), "riccati iterate");
  const Eigen::MatrixXd precision = symmetrized(m.inverse() + model.information_gain());
  const Eigen::Index n = model.state_dim();
  const Eigen::MatrixXd out = Eigen::LLT<Eigen::MatrixXd>(precision).solve(Eigen::MatrixXd::Identity(n, n));
  return SpdMatrix(symmetrized(out), "riccati iterate");
}

CorrectedState one_step_posterior(const LinearGaussianModel& model, const CorrectedState& prev,
                                  const Eigen::VectorXd& y) {
  if (prev.mean.size() != model.state_dim()) throw DimensionMismatch("one_step_posterior: state dimension mismatch");
  if (y.size() != model.obs_dim()) throw DimensionMismatch("one_step_posterior: observation dimension mismatch");
  SpdMatrix p = riccati_map_gain_form(model, prev.covariance);
  const Eigen::MatrixXd p_ct_sinv = p.matrix() * model.ct_sigma_inv();
  Eigen::VectorXd mean = (model.a() - p_ct_sinv * model.c() * model.a()) * prev.mean + p_ct_sinv * y;
  return {std::move(mean), std::move(p), prev.time + 1};
}

std::vector<CorrectedState> filter_sequence(const LinearGaussianModel& model,
                                            std::span<const Eigen::VectorXd> observations) {
  if (observations.empty()) throw InvalidArgument("filter_sequence needs at least one observation");
  std::vector<CorrectedState> out;
  out.reserve(observations.size());
  out.push_back(correct(model, prior_state(model), observations[0]));
  for (std::size_t k = 1; k < observations.size(); ++k) {
    out.push_back(correct(model, predict(model, out.back()), observations[k]));
  }
  return out;
}

DareSolution dare_fixed_point(const LinearGaussianModel& model, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("dare_fixed_point: tol must be positive");
  if (max_iter < 1) throw InvalidArgument("dare_fixed_point: max_iter must be >= 1");
  SpdMatrix p = model.p0();
  double distance = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    std::optional<SpdMatrix> next;
    try {
      next = riccati_map_gain_form(model, p);
    } catch (const NotPositiveDefinite&) {
      throw NonConvergence("Riccati iteration left the positive definite cone after " +
                               std::to_string(it - 1) + " iterations",
                           it - 1, p.matrix(), distance);
    }
    distance = thompson_distance_spd(*next, p);
    const double residual = (next->matrix() - p.matrix()).norm();
    if (distance <= tol && residual <= tol * (1.0 + p.matrix().norm())) {
      return {std::move(p), it, distance, residual};
    }
    p = std::move(*next);
  }
  throw NonConvergence("Riccati iteration did not converge within " + std::to_string(max_iter) +
                           " iterations (last Thompson step " + std::to_string(distance) + ")",
                       max_iter, p.matrix(), distance);
}

EquivalenceReport kalman_vs_hmm_equivalence(const LinearGaussianModel& model,
                                            std::span<const Eigen::VectorXd> observations) {
  const auto states = filter_sequence(model, observations);

  const Eigen::Index n = model.state_dim();
  const Eigen::Index m = model.obs_dim();
  const Eigen::VectorXd zero_n = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd zero_m = Eigen::VectorXd::Zero(m);

  EquivalenceReport report;
  gauss::GaussianDist belief(model.mu0(), model.p0());
  for (std::size_t k = 0; k < observations.size(); ++k) {
    if (k > 0) belief = gauss::linear_marginal(belief, model.a(), zero_n, model.gamma());
    belief = gauss::linear_conditional(belief, model.c(), zero_m, model.sigma(), observations[k]);
    report.max_mean_deviation =
        std::max(report.max_mean_deviation, scaled_deviation(states[k].mean, belief.mean()));
    report.max_covariance_deviation =
        std::max(report.max_covariance_deviation,
                 scaled_deviation(states[k].covariance.matrix(), belief.covariance().matrix()));
    ++report.steps;
  }
  return report;
}

}  // namespace hf::kalman
