#pragma once

// Kalman filter for the time-invariant system
//   X_{k+1} = A X_k + W_k,  W_k ~ N(0, Gamma)
//   Y_k     = C X_k + V_k,  V_k ~ N(0, Sigma)
//   X_0 ~ N(mu0, P0)
// together with the discrete Riccati map Phi(P) = P_{k|k} as a function of
// P_{k-1|k-1}.

#include "hf/cone_geometry.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace hf::kalman {

class LinearGaussianModel {
 public:
  LinearGaussianModel(Eigen::MatrixXd a, Eigen::MatrixXd c, SpdMatrix gamma, SpdMatrix sigma,
                      Eigen::VectorXd mu0, SpdMatrix p0);

  /// Builds the noise and prior covariances from raw matrices, naming the
  /// offending matrix ("Gamma", "Sigma", "P0") when one is not PD.
  static LinearGaussianModel from_matrices(Eigen::MatrixXd a, Eigen::MatrixXd c,
                                           const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& sigma,
                                           Eigen::VectorXd mu0, const Eigen::MatrixXd& p0);

  Eigen::Index state_dim() const { return a_.rows(); }
  Eigen::Index obs_dim() const { return c_.rows(); }

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& c() const { return c_; }
  const SpdMatrix& gamma() const { return gamma_; }
  const SpdMatrix& sigma() const { return sigma_; }
  const Eigen::VectorXd& mu0() const { return mu0_; }
  const SpdMatrix& p0() const { return p0_; }

  /// C^T Sigma^{-1} C and C^T Sigma^{-1}, cached.
  const Eigen::MatrixXd& information_gain() const { return ct_sinv_c_; }
  const Eigen::MatrixXd& ct_sigma_inv() const { return ct_sinv_; }

  LinearGaussianModel with_initial(Eigen::VectorXd mu0, SpdMatrix p0) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd c_;
  SpdMatrix gamma_;
  SpdMatrix sigma_;
  Eigen::VectorXd mu0_;
  SpdMatrix p0_;
  Eigen::MatrixXd ct_sinv_;
  Eigen::MatrixXd ct_sinv_c_;
};

enum class Stage { predicted, corrected };

/// Estimate at time k: (x_{k|k-1}, P_{k|k-1}) when predicted, (x_{k|k},
/// P_{k|k}) when corrected. The stage is part of the type so the recursion
/// cannot be mis-sequenced.
template <Stage S>
struct KalmanState {
  Eigen::VectorXd mean;
  SpdMatrix covariance;
  int time = 0;
};

using PredictedState = KalmanState<Stage::predicted>;
using CorrectedState = KalmanState<Stage::corrected>;

/// (mu0, P0) as the predicted state at time 0.
PredictedState prior_state(const LinearGaussianModel& model);

PredictedState predict(const LinearGaussianModel& model, const CorrectedState& state);

/// Gain form: K = P C^T (C P C^T + Sigma)^{-1}, covariance (I - K C) P.
CorrectedState correct(const LinearGaussianModel& model, const PredictedState& state,
                       const Eigen::VectorXd& y);

/// M - M C^T (C M C^T + Sigma)^{-1} C M with M = A P A^T + Gamma.
SpdMatrix riccati_map_gain_form(const LinearGaussianModel& model, const SpdMatrix& p);

/// ((A P A^T + Gamma)^{-1} + C^T Sigma^{-1} C)^{-1}.
SpdMatrix riccati_map_information_form(const LinearGaussianModel& model, const SpdMatrix& p);

/// P_{k|k} = Phi(P_{k-1|k-1}),
/// x_{k|k} = (A - P_{k|k} C^T Sigma^{-1} C A) x_{k-1|k-1} + P_{k|k} C^T Sigma^{-1} y_k.
CorrectedState one_step_posterior(const LinearGaussianModel& model, const CorrectedState& prev,
                                  const Eigen::VectorXd& y);

/// Correct with y_0 at the prior, then alternate predict/correct.
std::vector<CorrectedState> filter_sequence(const LinearGaussianModel& model,
                                            std::span<const Eigen::VectorXd> observations);

struct DareSolution {
  SpdMatrix covariance;
  int iterations;
  double last_step_distance;  // Thompson distance between the last two iterates
  double residual;            // ||Phi(P*) - P*||_F
};

/// Iterates Phi from P0 until successive iterates are within `tol` in the
/// Thompson metric and ||Phi(P) - P||_F <= tol (1 + ||P||_F). Throws
/// NonConvergence after `max_iter` applications of Phi.
DareSolution dare_fixed_point(const LinearGaussianModel& model, double tol, int max_iter);

struct EquivalenceReport {
  double max_mean_deviation = 0.0;
  double max_covariance_deviation = 0.0;
  std::size_t steps = 0;
};

/// Runs filter_sequence and, independently, the Gaussian marginalize /
/// condition recursion (prediction through linear_marginal with (A, 0, Gamma),
/// update through linear_conditional with (C, 0, Sigma)). Deviations are the
/// largest entrywise |a - b| / max(1, |a|) over all steps.
EquivalenceReport kalman_vs_hmm_equivalence(const LinearGaussianModel& model,
                                            std::span<const Eigen::VectorXd> observations);

}  // namespace hf::kalman
