#pragma once

// JSON model/config ingestion and JSON/CSV report emission.
//
// Config schema (top-level "kind" selects the shape):
//   hmm:     "transition" (n x n, row = source, row-stochastic),
//            "emission" (n x alphabet), "initial" (n)
//   kalman:  "n", "m", "A" (n x n), "C" (m x n), "Gamma" (n x n),
//            "Sigma" (m x m), "mu0" (n), "P0" (n x n)
//   metric:  "cone" in {orthant, spd, measure}, "x", "y"
//   lab:     "seed" (optional), "experiment": { "kind", "trials", "dims",
//            "horizon", ... }
// Matrices are arrays of row arrays of finite numbers.

#include "hf/contraction_lab.hpp"
#include "hf/hmm_filter.hpp"
#include "hf/kalman.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hf::io {

using json = nlohmann::json;
using Model = std::variant<hmm::HmmModel, kalman::LinearGaussianModel>;

/// Throws ConfigError carrying the parser's line/column diagnostic.
json read_json_file(const std::filesystem::path& path);

Eigen::MatrixXd matrix_field(const json& obj, std::string_view field);
Eigen::VectorXd vector_field(const json& obj, std::string_view field);

/// Every invariant of the model is checked; violations become ConfigError
/// naming the field ("transition row 1 sums to ...", "Gamma not positive
/// definite").
Model model_from_json(const json& config);
Model load_model(const std::filesystem::path& path);

json emit_model(const hmm::HmmModel& model);
json emit_model(const kalman::LinearGaussianModel& model);
json emit_model(const Model& model);

/// Seed precedence: seed_override, then experiment.seed, then top-level
/// seed; none of them present is a ConfigError.
lab::ExperimentConfig experiment_from_json(const json& config, std::optional<std::uint64_t> seed_override);
json experiment_to_json(const lab::ExperimentConfig& config);

/// Report without the wall-time field; identical for identical configs.
json report_body_json(const lab::ExperimentReport& report);
json report_json(const lab::ExperimentReport& report);

/// 17 significant digits (lossless for doubles).
std::string format_double(double value);

/// CSV for the report's record kind: ratio experiments
/// `trial,d_before,d_after,ratio`, Riccati traces
/// `step,hilbert_distance,thompson_distance`, tightness runs
/// `trial,rows,cols,diameter,bound,sampled_max,pairs`.
void write_report_csv(std::ostream& out, const lab::ExperimentReport& report);

/// Distance as a number, or the string "infinite".
json distance_json(const ExtendedDistance& d);

}  // namespace hf::io
