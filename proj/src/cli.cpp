#include "hf/cli.hpp"

#include "hf/model_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace hf::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

struct Invocation {
  std::string config_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string format = "both";
  int max_iter = 1000;
  double tol = 1e-10;

  bool want_json() const { return format != "csv"; }
  bool want_csv() const { return format != "json"; }
};

void add_common_options(CLI::App& sub, Invocation& inv) {
  sub.add_option("--config", inv.config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  sub.add_option("--out", inv.output_dir, "Output directory (created if missing)");
  sub.add_option("--seed", inv.seed, "Seed; overrides the config");
  sub.add_option("--format", inv.format, "Output files to write")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  sub.add_option("--max-iter", inv.max_iter, "Iteration cap for the Riccati fixed point")
      ->check(CLI::PositiveNumber);
  sub.add_option("--tol", inv.tol, "Convergence tolerance for the Riccati fixed point")
      ->check(CLI::PositiveNumber);
}

std::ofstream open_output(const Invocation& inv, const std::string& name) {
  fs::create_directories(inv.output_dir);
  std::ofstream out(fs::path(inv.output_dir) / name);
  if (!out) throw Error("cannot write " + (fs::path(inv.output_dir) / name).string());
  return out;
}

void write_json(const Invocation& inv, const std::string& name, const json& value) {
  if (!inv.want_json()) return;
  open_output(inv, name) << value.dump(2) << '\n';
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::VectorXd row = m.row(i).transpose();
    rows.push_back(vector_json(row));
  }
  return rows;
}

// --- metric -----------------------------------------------------------------

int run_metric(const Invocation& inv, std::ostream& out) {
  const json config = io::read_json_file(inv.config_path);
  const json& cone = config.contains("cone") ? config["cone"] : throw ConfigError("missing field 'cone'");
  json result = {{"cone", cone}};
  std::optional<double> thompson;
  ExtendedDistance hilbert = ExtendedDistance::infinite();
  if (cone == "orthant" || cone == "measure") {
    std::optional<ConeVector> x;
    std::optional<ConeVector> y;
    try {
      x.emplace(io::vector_field(config, "x"));
      y.emplace(io::vector_field(config, "y"));
    } catch (const ConeMembershipError& e) {
      throw ConfigError(std::string("fields 'x'/'y': ") + e.what());
    }
    if (x->dim() != y->dim()) throw ConfigError("fields 'x' and 'y' must have the same length");
    if (cone == "orthant") {
      if (!x->is_interior() || !y->is_interior()) {
        throw ConfigError("fields 'x' and 'y' must be strictly positive for the orthant cone");
      }
      const auto b = order_bounds_orthant(*x, *y);
      result["order_bounds"] = {{"M", b.max_ratio}, {"m", b.min_ratio}};
      hilbert = hilbert_distance_orthant(*x, *y);
    } else {
      hilbert = hilbert_distance_measures(*x, *y);
    }
  } else if (cone == "spd") {
    const Eigen::MatrixXd xm = io::matrix_field(config, "x");
    const Eigen::MatrixXd ym = io::matrix_field(config, "y");
    std::optional<SpdMatrix> x;
    std::optional<SpdMatrix> y;
    try {
      x.emplace(xm, "x");
      y.emplace(ym, "y");
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    if (x->size() != y->size()) throw ConfigError("fields 'x' and 'y' must have the same size");
    hilbert = hilbert_distance_spd(*x, *y);
    thompson = thompson_distance_spd(*x, *y);
    result["thompson_distance"] = *thompson;
  } else {
    throw ConfigError("field 'cone' must be one of orthant, spd, measure");
  }
  result["hilbert_distance"] = io::distance_json(hilbert);
  write_json(inv, "metric.json", result);
  if (inv.want_csv()) {
    auto csv = open_output(inv, "metric.csv");
    csv << "cone,hilbert_distance,thompson_distance\n"
        << cone.get<std::string>() << ','
        << io::format_double(hilbert.value_or(std::numeric_limits<double>::infinity())) << ','
        << (thompson ? io::format_double(*thompson) : std::string()) << '\n';
  }
  out << "hilbert_distance = " << io::format_double(hilbert.value_or(std::numeric_limits<double>::infinity()))
      << '\n';
  return kExitOk;
}

// --- hmm-filter -------------------------------------------------------------

int run_hmm(const Invocation& inv, std::ostream& out) {
  const json config = io::read_json_file(inv.config_path);
  const auto model_variant = io::model_from_json(config);
  const auto* model = std::get_if<hmm::HmmModel>(&model_variant);
  if (model == nullptr) throw ConfigError("field 'kind' must be \"hmm\" for hmm-filter");
  if (!config.contains("observations") || !config["observations"].is_array() || config["observations"].empty()) {
    throw ConfigError("field 'observations' must be a nonempty array of symbols");
  }
  std::vector<std::size_t> observations;
  for (std::size_t k = 0; k < config["observations"].size(); ++k) {
    const json& y = config["observations"][k];
    if (!y.is_number_unsigned() || y.get<std::size_t>() >= static_cast<std::size_t>(model->alphabet_size())) {
      throw ConfigError("field 'observations' entry " + std::to_string(k) + " is not a symbol of the alphabet");
    }
    observations.push_back(y.get<std::size_t>());
  }

  const auto trace = hmm::filter_sequence(*model, observations);

  json densities = json::array();
  for (const auto& d : trace.densities) densities.push_back(vector_json(d.entries()));
  write_json(inv, "report.json",
             {{"model", io::emit_model(*model)},
              {"observations", observations},
              {"densities", std::move(densities)},
              {"log_likelihood_increments", trace.log_likelihood_increments},
              {"log_likelihood", trace.log_likelihood()}});
  if (inv.want_csv()) {
    auto csv = open_output(inv, "trace.csv");
    csv << "step,log_normalizer";
    for (Eigen::Index i = 0; i < model->states(); ++i) csv << ",p_" << i;
    csv << '\n';
    for (std::size_t k = 0; k < trace.densities.size(); ++k) {
      csv << k << ',' << io::format_double(trace.log_likelihood_increments[k]);
      for (std::size_t i = 0; i < trace.densities[k].dim(); ++i) csv << ',' << io::format_double(trace.densities[k][i]);
      csv << '\n';
    }
  }
  out << "log_likelihood = " << io::format_double(trace.log_likelihood()) << '\n';
  return kExitOk;
}

// --- kalman -----------------------------------------------------------------

const kalman::LinearGaussianModel& expect_kalman(const io::Model& m, const char* command) {
  const auto* model = std::get_if<kalman::LinearGaussianModel>(&m);
  if (model == nullptr) throw ConfigError(std::string("field 'kind' must be \"kalman\" for ") + command);
  return *model;
}

std::vector<Eigen::VectorXd> kalman_observations(const json& config, Eigen::Index m) {
  std::vector<Eigen::VectorXd> ys;
  if (!config.contains("observations")) return ys;
  const Eigen::MatrixXd rows = io::matrix_field(config, "observations");
  if (rows.cols() != m) throw ConfigError("field 'observations' rows must have m = " + std::to_string(m) + " entries");
  for (Eigen::Index k = 0; k < rows.rows(); ++k) ys.emplace_back(rows.row(k).transpose());
  return ys;
}

int run_kalman(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const json config = io::read_json_file(inv.config_path);
  const auto variant = io::model_from_json(config);
  const auto& model = expect_kalman(variant, "kalman");
  const auto observations = kalman_observations(config, model.obs_dim());

  json report = {{"model", io::emit_model(model)}};
  json states = json::array();
  std::vector<kalman::CorrectedState> filtered;
  if (!observations.empty()) {
    filtered = kalman::filter_sequence(model, observations);
    for (const auto& s : filtered) {
      states.push_back({{"time", s.time}, {"mean", vector_json(s.mean)}, {"covariance", matrix_json(s.covariance.matrix())}});
    }
  }
  report["states"] = std::move(states);

  int code = kExitOk;
  try {
    const auto dare = kalman::dare_fixed_point(model, inv.tol, inv.max_iter);
    report["dare"] = {{"converged", true},
                      {"iterations", dare.iterations},
                      {"covariance", matrix_json(dare.covariance.matrix())},
                      {"last_step_distance", dare.last_step_distance},
                      {"residual", dare.residual}};
    out << "dare converged in " << dare.iterations << " iterations\n";
  } catch (const NonConvergence& e) {
    json last = e.last_iterate().allFinite() ? matrix_json(e.last_iterate()) : json("non-finite");
    report["dare"] = {{"converged", false},
                      {"iterations", e.iterations()},
                      {"message", e.what()},
                      {"last_iterate", last},
                      {"last_step_distance", io::format_double(e.last_step_distance())}};
    err << "error: " << e.what() << '\n';
    code = kExitRuntime;
  }
  write_json(inv, "report.json", report);
  if (inv.want_csv()) {
    auto csv = open_output(inv, "trace.csv");
    const Eigen::Index n = model.state_dim();
    csv << "step";
    for (Eigen::Index i = 0; i < n; ++i) csv << ",mean_" << i;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) csv << ",P_" << i << '_' << j;
    csv << '\n';
    for (const auto& s : filtered) {
      csv << s.time;
      for (Eigen::Index i = 0; i < n; ++i) csv << ',' << io::format_double(s.mean[i]);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) csv << ',' << io::format_double(s.covariance.matrix()(i, j));
      csv << '\n';
    }
  }
  return code;
}

// --- riccati / lab ----------------------------------------------------------

void write_lab_outputs(const Invocation& inv, const lab::ExperimentReport& report, std::ostream& out) {
  write_json(inv, "report.json", io::report_json(report));
  if (inv.want_csv()) {
    auto csv = open_output(inv, "trace.csv");
    io::write_report_csv(csv, report);
  }
  out << lab::to_string(report.config.kind) << ": " << (report.summary.pass ? "pass" : "FAIL")
      << " (records " << report.summary.records << ", max ratio " << io::format_double(report.summary.max_ratio)
      << ")\n";
}

int run_riccati(const Invocation& inv, std::ostream& out) {
  const json config = io::read_json_file(inv.config_path);
  const auto variant = io::model_from_json(config);
  const auto& model = expect_kalman(variant, "riccati");
  lab::ExperimentConfig c;
  c.kind = lab::ExperimentKind::riccati_trace;
  c.model = model;
  const Eigen::MatrixXd alt = io::matrix_field(config, "P0_alt");
  try {
    c.alt_covariance = SpdMatrix(alt, "P0_alt");
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (config.contains("horizon")) {
    if (!config["horizon"].is_number_unsigned()) throw ConfigError("field 'horizon' must be a positive integer");
    c.horizon = config["horizon"].get<std::size_t>();
  } else {
    c.horizon = 30;
  }
  if (inv.seed) c.seed = *inv.seed;
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto report = lab::run_riccati_trace(c);
  write_lab_outputs(inv, report, out);
  return kExitOk;
}

int run_lab(const Invocation& inv, std::ostream& out) {
  const json config = io::read_json_file(inv.config_path);
  const auto c = io::experiment_from_json(config, inv.seed);
  const auto report = lab::run_experiment(c);
  write_lab_outputs(inv, report, out);
  return kExitOk;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hilbert-metric contraction experiments for filtering recursions", "hfilter"};
  app.require_subcommand(1);
  Invocation inv;
  auto* metric = app.add_subcommand("metric", "Hilbert/Thompson distance between two cone elements");
  auto* hmm_filter = app.add_subcommand("hmm-filter", "Forward filtering on a finite-state HMM");
  auto* kalman_cmd = app.add_subcommand("kalman", "Kalman filter run and Riccati fixed point");
  auto* riccati = app.add_subcommand("riccati", "Distance trace between two Riccati trajectories");
  auto* lab_cmd = app.add_subcommand("lab", "Randomized contraction experiment");
  for (auto* sub : {metric, hmm_filter, kalman_cmd, riccati, lab_cmd}) add_common_options(*sub, inv);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (metric->parsed()) return run_metric(inv, out);
    if (hmm_filter->parsed()) return run_hmm(inv, out);
    if (kalman_cmd->parsed()) return run_kalman(inv, out, err);
    if (riccati->parsed()) return run_riccati(inv, out);
    return run_lab(inv, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int parse_and_dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return parse_and_dispatch(args, std::cout, std::cerr);
}

}  // namespace hf::cli
