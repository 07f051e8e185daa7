#pragma once

// Randomized, seeded experiments that measure contraction of the Hilbert
// metric under filtering maps and of the Riccati iteration.
//
// Trial t always draws from Rng::stream(seed, t), and records are assembled in
// trial order, so a report depends only on its config, never on the number of
// worker threads.

#include "hf/cone_geometry.hpp"
#include "hf/kalman.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hf::lab {

enum class ExperimentKind {
  orthant_nonexpansive,  // one unnormalized filter step on random HMMs
  birkhoff_tightness,
  hmm_forgetting,
  riccati_trace,
  horizon_contraction,
};

std::string_view to_string(ExperimentKind kind);
/// Accepts the names printed by to_string; throws InvalidArgument otherwise.
ExperimentKind parse_kind(std::string_view name);

/// Cap on resampling a degenerate draw within one trial.
inline constexpr int kMaxResamples = 100;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::orthant_nonexpansive;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t min_dim = 2;
  std::size_t max_dim = 2;
  std::size_t horizon = 1;
  /// Horizon windows per trial (horizon_contraction).
  std::size_t windows = 4;
  /// Sampled pairs per matrix (birkhoff_tightness).
  std::size_t pairs = 100000;
  double tolerance = 1e-9;
  /// Worker threads; 0 means hardware concurrency.
  std::size_t threads = 1;

  std::optional<Eigen::MatrixXd> transition;  // fixed HMM transition, row = source
  std::optional<Eigen::VectorXd> likelihood;  // fixed per-step likelihood
  std::optional<Eigen::MatrixXd> matrix;      // fixed positive map
  std::optional<kalman::LinearGaussianModel> model;
  std::optional<SpdMatrix> alt_covariance;    // second initial covariance

  /// Throws InvalidArgument on trials, horizon, dims or pairs out of range
  /// and on missing kind-specific parameters.
  void validate() const;
};

struct RatioRecord {
  std::size_t trial = 0;
  std::size_t step = 0;
  double d_before = 0.0;
  double d_after = 0.0;
  double ratio = 0.0;
  double bound = 1.0;
};

struct TraceRecord {
  std::size_t step = 0;
  double hilbert_distance = 0.0;
  double thompson_distance = 0.0;
};

struct MatrixRecord {
  std::size_t trial = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  ExtendedDistance diameter = ExtendedDistance::infinite();
  double bound = 1.0;
  double sampled_max = 0.0;
  std::size_t pairs = 0;
};

struct Summary {
  std::size_t records = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::size_t violations = 0;
  bool pass = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RatioRecord> ratios;
  std::vector<TraceRecord> trace;
  std::vector<MatrixRecord> matrices;
  /// Kind-specific derived quantities (coefficients, counts, flags as 0/1).
  std::map<std::string, double> diagnostics;
  std::size_t resampled = 0;
  Summary summary;
  double wall_time_seconds = 0.0;
};

/// Pass/fail and statistics as a pure function of the records.
///  - ratio kinds: every ratio <= bound + tolerance;
///  - birkhoff_tightness: every sampled_max <= bound + tolerance, and among
///    2 x 2 matrices sampled with >= 1e5 pairs at least 90% reach
///    0.95 * bound;
///  - riccati_trace: the Thompson distance never increases by more than
///    tolerance between consecutive steps.
Summary summarize(ExperimentKind kind, const std::vector<RatioRecord>& ratios,
                  const std::vector<TraceRecord>& trace, const std::vector<MatrixRecord>& matrices,
                  double tolerance);

ExperimentReport run_hmm_nonexpansiveness(const ExperimentConfig& config);
ExperimentReport run_birkhoff_tightness(const ExperimentConfig& config);
ExperimentReport run_hmm_forgetting(const ExperimentConfig& config);
ExperimentReport run_riccati_trace(const ExperimentConfig& config);
ExperimentReport run_horizon_contraction(const ExperimentConfig& config);

/// Dispatches on config.kind.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Smallest p <= (n-1)^2 + 1 with every entry of M^p positive, if any.
std::optional<int> primitivity_exponent(const Eigen::MatrixXd& m);

}  // namespace hf::lab
