#include "hf/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hf::io {

namespace {

std::string quoted(std::string_view field) { return "'" + std::string(field) + "'"; }

const json& require(const json& obj, std::string_view field) {
  if (!obj.is_object()) throw ConfigError("expected a JSON object containing " + quoted(field));
  const auto it = obj.find(std::string(field));
  if (it == obj.end()) throw ConfigError("missing field " + quoted(field));
  return *it;
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a finite number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + " must be a finite number");
  return d;
}

std::uint64_t unsigned_field(const json& obj, std::string_view field) {
  const json& v = require(obj, field);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError("field " + quoted(field) + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "infinite" : "-infinite";
  return v;
}

template <typename Fn>
auto as_config_error(std::string_view context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string(context) + ": " + e.what());
  }
}

hmm::HmmModel hmm_from_json(const json& config) {
  Eigen::MatrixXd transition = matrix_field(config, "transition");
  Eigen::MatrixXd emission = matrix_field(config, "emission");
  Eigen::VectorXd initial = vector_field(config, "initial");
  if (config.contains("n") && unsigned_field(config, "n") != static_cast<std::uint64_t>(transition.rows())) {
    throw ConfigError("field 'n' does not match the size of 'transition'");
  }
  return as_config_error("hmm model", [&] {
    return hmm::HmmModel(std::move(transition), std::move(emission), ConeVector(std::move(initial)));
  });
}

kalman::LinearGaussianModel kalman_from_json(const json& config) {
  const auto n = static_cast<Eigen::Index>(unsigned_field(config, "n"));
  const auto m = static_cast<Eigen::Index>(unsigned_field(config, "m"));
  Eigen::MatrixXd a = matrix_field(config, "A");
  Eigen::MatrixXd c = matrix_field(config, "C");
  const Eigen::MatrixXd gamma = matrix_field(config, "Gamma");
  const Eigen::MatrixXd sigma = matrix_field(config, "Sigma");
  Eigen::VectorXd mu0 = vector_field(config, "mu0");
  const Eigen::MatrixXd p0 = matrix_field(config, "P0");
  auto expect = [](std::string_view name, const Eigen::MatrixXd& x, Eigen::Index r, Eigen::Index cdim) {
    if (x.rows() != r || x.cols() != cdim) {
      throw ConfigError("field " + quoted(name) + " must be " + std::to_string(r) + " x " + std::to_string(cdim));
    }
  };
  expect("A", a, n, n);
  expect("C", c, m, n);
  expect("Gamma", gamma, n, n);
  expect("Sigma", sigma, m, m);
  expect("P0", p0, n, n);
  if (mu0.size() != n) throw ConfigError("field 'mu0' must have " + std::to_string(n) + " entries");
  return as_config_error("kalman model", [&] {
    return kalman::LinearGaussianModel::from_matrices(std::move(a), std::move(c), gamma, sigma, std::move(mu0), p0);
  });
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Eigen::MatrixXd matrix_field(const json& obj, std::string_view field) {
  const json& v = require(obj, field);
  if (!v.is_array() || v.empty()) throw ConfigError("field " + quoted(field) + " must be a nonempty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) throw ConfigError("field " + quoted(field) + " row 0 must be a nonempty array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != cols) {
      throw ConfigError("field " + quoted(field) + " row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          finite_number(row[j], "field " + quoted(field) + " entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
    }
  }
  return m;
}

Eigen::VectorXd vector_field(const json& obj, std::string_view field) {
  const json& v = require(obj, field);
  if (!v.is_array() || v.empty()) throw ConfigError("field " + quoted(field) + " must be a nonempty array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] =
        finite_number(v[i], "field " + quoted(field) + " entry " + std::to_string(i));
  }
  return out;
}

Model model_from_json(const json& config) {
  const json& kind = require(config, "kind");
  if (kind == "hmm") return hmm_from_json(config);
  if (kind == "kalman") return kalman_from_json(config);
  throw ConfigError("field 'kind' must be \"hmm\" or \"kalman\" for a model");
}

Model load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

json emit_model(const hmm::HmmModel& model) {
  return {{"kind", "hmm"},
          {"n", model.states()},
          {"transition", matrix_json(model.transition())},
          {"emission", matrix_json(model.emission())},
          {"initial", vector_json(model.initial().entries())}};
}

json emit_model(const kalman::LinearGaussianModel& model) {
  return {{"kind", "kalman"},
          {"n", model.state_dim()},
          {"m", model.obs_dim()},
          {"A", matrix_json(model.a())},
          {"C", matrix_json(model.c())},
          {"Gamma", matrix_json(model.gamma().matrix())},
          {"Sigma", matrix_json(model.sigma().matrix())},
          {"mu0", vector_json(model.mu0())},
          {"P0", matrix_json(model.p0().matrix())}};
}

json emit_model(const Model& model) {
  return std::visit([](const auto& m) { return emit_model(m); }, model);
}

lab::ExperimentConfig experiment_from_json(const json& config, std::optional<std::uint64_t> seed_override) {
  const json& e = require(config, "experiment");
  if (!e.is_object()) throw ConfigError("field 'experiment' must be an object");
  lab::ExperimentConfig c;
  const json& kind = require(e, "kind");
  if (!kind.is_string()) throw ConfigError("field 'experiment.kind' must be a string");
  c.kind = as_config_error("experiment.kind", [&] { return lab::parse_kind(kind.get<std::string>()); });

  if (seed_override) {
    c.seed = *seed_override;
  } else if (e.contains("seed")) {
    c.seed = unsigned_field(e, "seed");
  } else if (config.contains("seed")) {
    c.seed = unsigned_field(config, "seed");
  } else {
    throw ConfigError("no seed: pass --seed or set 'seed' in the config");
  }

  if (e.contains("trials")) c.trials = unsigned_field(e, "trials");
  if (e.contains("horizon")) c.horizon = unsigned_field(e, "horizon");
  if (e.contains("windows")) c.windows = unsigned_field(e, "windows");
  if (e.contains("pairs")) c.pairs = unsigned_field(e, "pairs");
  if (e.contains("threads")) c.threads = unsigned_field(e, "threads");
  if (e.contains("tolerance")) c.tolerance = finite_number(e["tolerance"], "field 'tolerance'");
  if (e.contains("dims")) {
    const json& d = e["dims"];
    if (d.is_number_unsigned()) {
      c.min_dim = c.max_dim = d.get<std::size_t>();
    } else if (d.is_array() && d.size() == 2 && d[0].is_number_unsigned() && d[1].is_number_unsigned()) {
      c.min_dim = d[0].get<std::size_t>();
      c.max_dim = d[1].get<std::size_t>();
    } else {
      throw ConfigError("field 'dims' must be a positive integer or [min, max]");
    }
  }
  if (e.contains("transition")) c.transition = matrix_field(e, "transition");
  if (e.contains("likelihood")) c.likelihood = vector_field(e, "likelihood");
  if (e.contains("matrix")) c.matrix = matrix_field(e, "matrix");
  if (e.contains("model")) c.model = kalman_from_json(e["model"]);
  if (e.contains("P0_alt")) {
    const Eigen::MatrixXd alt = matrix_field(e, "P0_alt");
    c.alt_covariance = as_config_error("P0_alt", [&] { return SpdMatrix(alt, "P0_alt"); });
  }
  if (c.transition) {
    // Row-stochastic check with row-level diagnostics.
    as_config_error("experiment.transition", [&] {
      const Eigen::Index n = c.transition->rows();
      return hmm::HmmModel(*c.transition, Eigen::MatrixXd::Ones(n, 1),
                           ConeVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))));
    });
  }
  as_config_error("experiment", [&] {
    c.validate();
    return 0;
  });
  return c;
}

json experiment_to_json(const lab::ExperimentConfig& c) {
  json e = {{"kind", std::string(lab::to_string(c.kind))},
            {"seed", c.seed},
            {"trials", c.trials},
            {"dims", {c.min_dim, c.max_dim}},
            {"horizon", c.horizon},
            {"windows", c.windows},
            {"pairs", c.pairs},
            {"tolerance", c.tolerance}};
  if (c.transition) e["transition"] = matrix_json(*c.transition);
  if (c.likelihood) e["likelihood"] = vector_json(*c.likelihood);
  if (c.matrix) e["matrix"] = matrix_json(*c.matrix);
  if (c.model) e["model"] = emit_model(*c.model);
  if (c.alt_covariance) e["P0_alt"] = matrix_json(c.alt_covariance->matrix());
  return e;
}

json distance_json(const ExtendedDistance& d) {
  if (d.is_infinite()) return "infinite";
  return d.value();
}

json report_body_json(const lab::ExperimentReport& r) {
  json body;
  body["experiment"] = experiment_to_json(r.config);
  body["summary"] = {{"records", r.summary.records},       {"max_ratio", number_json(r.summary.max_ratio)},
                     {"mean_ratio", number_json(r.summary.mean_ratio)}, {"violations", r.summary.violations},
                     {"pass", r.summary.pass}};
  json diagnostics = json::object();
  for (const auto& [k, v] : r.diagnostics) diagnostics[k] = number_json(v);
  body["diagnostics"] = std::move(diagnostics);
  body["resampled"] = r.resampled;

  json records = json::array();
  if (r.config.kind == lab::ExperimentKind::riccati_trace) {
    for (const auto& t : r.trace) {
      records.push_back({{"step", t.step},
                         {"hilbert_distance", number_json(t.hilbert_distance)},
                         {"thompson_distance", number_json(t.thompson_distance)}});
    }
  } else if (r.config.kind == lab::ExperimentKind::birkhoff_tightness) {
    for (const auto& m : r.matrices) {
      records.push_back({{"trial", m.trial},
                         {"rows", m.rows},
                         {"cols", m.cols},
                         {"diameter", distance_json(m.diameter)},
                         {"bound", m.bound},
                         {"sampled_max", m.sampled_max},
                         {"pairs", m.pairs}});
    }
  } else {
    for (const auto& x : r.ratios) {
      records.push_back({{"trial", x.trial},
                         {"step", x.step},
                         {"d_before", number_json(x.d_before)},
                         {"d_after", number_json(x.d_after)},
                         {"ratio", number_json(x.ratio)},
                         {"bound", number_json(x.bound)}});
    }
  }
  body["records"] = std::move(records);
  return body;
}

json report_json(const lab::ExperimentReport& report) {
  json out = report_body_json(report);
  out["wall_time_seconds"] = report.wall_time_seconds;
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_report_csv(std::ostream& out, const lab::ExperimentReport& r) {
  if (r.config.kind == lab::ExperimentKind::riccati_trace) {
    out << "step,hilbert_distance,thompson_distance\n";
    for (const auto& t : r.trace) {
      out << t.step << ',' << format_double(t.hilbert_distance) << ',' << format_double(t.thompson_distance) << '\n';
    }
    return;
  }
  if (r.config.kind == lab::ExperimentKind::birkhoff_tightness) {
    out << "trial,rows,cols,diameter,bound,sampled_max,pairs\n";
    for (const auto& m : r.matrices) {
      out << m.trial << ',' << m.rows << ',' << m.cols << ','
          << (m.diameter.is_infinite() ? std::string("infinite") : format_double(m.diameter.value())) << ','
          << format_double(m.bound) << ',' << format_double(m.sampled_max) << ',' << m.pairs << '\n';
    }
    return;
  }
  out << "trial,d_before,d_after,ratio\n";
  for (const auto& x : r.ratios) {
    out << x.trial << ',' << format_double(x.d_before) << ',' << format_double(x.d_after) << ','
        << format_double(x.ratio) << '\n';
  }
}

}  // namespace hf::io
