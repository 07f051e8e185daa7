#pragma once

// Deterministic random streams. Each trial of an experiment draws from its own
// stream derived from (seed, trial index), so results do not depend on the
// order in which trials run.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hf {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent stream for one trial.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Standard normal by Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Entries exp(U), U uniform on [-half_width, half_width].
  Eigen::VectorXd log_uniform_vector(Eigen::Index n, double half_width = 3.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::exp(uniform(-half_width, half_width));
    return v;
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  /// B B^T + shift * I with B standard normal; condition number stays moderate.
  Eigen::MatrixXd spd_matrix(Eigen::Index n, double shift = 0.5) {
    const Eigen::MatrixXd b = normal_matrix(n, n);
    return b * b.transpose() / static_cast<double>(n) +
           shift * Eigen::MatrixXd::Identity(n, n);
  }

  /// Row-stochastic matrix with entries proportional to exp(U[-w, w]).
  Eigen::MatrixXd stochastic_matrix(Eigen::Index n, double half_width = 1.0) {
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd row = log_uniform_vector(n, half_width);
      q.row(i) = row.transpose() / row.sum();
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hf
