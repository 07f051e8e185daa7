#pragma once

// Forward filtering for hidden Markov models with a finite state space.
//
// The transition matrix is indexed q(source, target); prediction integrates
// the density against q, i.e. multiplies by q^T. Emissions are a table over a
// finite alphabet; every step also has an overload taking an arbitrary
// per-state likelihood vector so callers can inject continuous observations.

#include "hf/cone_geometry.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace hf::hmm {

/// Tolerance on row sums of the transition matrix and on the initial mass.
inline constexpr double kStochasticTol = 1e-9;

class HmmModel {
 public:
  /// transition: n x n row-stochastic; emission: n x alphabet, entries >= 0,
  /// every column has a positive entry; initial: probability vector.
  HmmModel(Eigen::MatrixXd transition, Eigen::MatrixXd emission, ConeVector initial);

  Eigen::Index states() const { return transition_.rows(); }
  Eigen::Index alphabet_size() const { return emission_.cols(); }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const Eigen::MatrixXd& emission() const { return emission_; }
  const ConeVector& initial() const { return initial_; }

  /// g(., y) as a column of the emission table.
  Eigen::VectorXd likelihood(std::size_t symbol) const;

  /// q^T stored column-major, i.e. q laid out row by row.
  const Eigen::MatrixXd& transition_transposed() const { return transition_t_; }

 private:
  Eigen::MatrixXd transition_;
  Eigen::MatrixXd transition_t_;
  Eigen::MatrixXd emission_;
  ConeVector initial_;
};

/// Normalized density plus the log of the normalizing constant that produced it.
struct FilterStep {
  ConeVector density;
  double log_normalizer;
};

FilterStep initialize(const HmmModel& model, std::size_t y0);
FilterStep initialize(const HmmModel& model, const Eigen::VectorXd& likelihood);

/// q^T alpha. alpha must be a probability vector.
ConeVector predict(const HmmModel& model, const ConeVector& alpha);

/// Normalized g o alpha_pred; throws ImpossibleObservation on a zero normalizer.
FilterStep update(const ConeVector& alpha_pred, const Eigen::VectorXd& likelihood);

/// update(predict(alpha), g(., y)).
FilterStep forward_step(const HmmModel& model, const ConeVector& alpha, std::size_t y);
FilterStep forward_step(const HmmModel& model, const ConeVector& alpha,
                        const Eigen::VectorXd& likelihood);

/// g(., y) o (q^T f) without normalization. Linear and positive in f.
ConeVector unnormalized_step(const HmmModel& model, const ConeVector& f, std::size_t y);
ConeVector unnormalized_step(const HmmModel& model, const ConeVector& f,
                             const Eigen::VectorXd& likelihood);

struct FilterTrace {
  std::vector<ConeVector> densities;
  std::vector<double> log_likelihood_increments;

  double log_likelihood() const;
};

/// Runs the recursion over y_0..y_T. ImpossibleObservation carries the step.
FilterTrace filter_sequence(const HmmModel& model, std::span<const std::size_t> observations);
FilterTrace filter_sequence(const HmmModel& model, std::span<const Eigen::VectorXd> likelihoods);

}  // namespace hf::hmm
