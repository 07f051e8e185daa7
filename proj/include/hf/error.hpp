#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hf {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A vector is not in the cone region an operation requires (negative,
/// non-finite, all-zero, or a zero entry where strict positivity is needed).
class ConeMembershipError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Any other violated precondition or model invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The observation has zero likelihood under the current filter density.
class ImpossibleObservation : public Error {
 public:
  explicit ImpossibleObservation(std::optional<std::size_t> step)
      : Error(step ? "impossible observation at step " + std::to_string(*step)
                   : std::string("impossible observation: zero normalizer")),
        step_(step) {}

  std::optional<std::size_t> step() const { return step_; }

 private:
  std::optional<std::size_t> step_;
};

/// Fixed-point iteration ran out of iterations (or left the PD cone).
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, Eigen::MatrixXd last_iterate,
                 double last_step_distance)
      : Error(what),
        iterations_(iterations),
        last_iterate_(std::move(last_iterate)),
        last_step_distance_(last_step_distance) {}

  int iterations() const { return iterations_; }
  const Eigen::MatrixXd& last_iterate() const { return last_iterate_; }
  double last_step_distance() const { return last_step_distance_; }

 private:
  int iterations_;
  Eigen::MatrixXd last_iterate_;
  double last_step_distance_;
};

/// Malformed or invariant-violating configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hf
