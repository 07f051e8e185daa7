#include "hf/contraction_lab.hpp"

#include "hf/hmm_filter.hpp"
#include "hf/positive_maps.hpp"
#include "hf/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace hf::lab {

namespace {

constexpr std::size_t kTightnessPairs = 100000;
constexpr double kTightnessFraction = 0.95;
constexpr double kTightnessShare = 0.90;

/// Runs fn(t) for t in [0, trials) on `threads` workers; results in trial order.
template <typename Result, typename Fn>
std::vector<Result> parallel_trials(std::size_t trials, std::size_t threads, Fn fn) {
  std::vector<std::optional<Result>> slots(trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, trials);

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&](std::size_t first) {
    for (std::size_t t = first; t < trials; t += threads) {
      try {
        slots[t].emplace(fn(t));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Result> out;
  out.reserve(trials);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Eigen::Index sample_dim(Rng& rng, const ExperimentConfig& config) {
  return static_cast<Eigen::Index>(
      rng.integer(static_cast<std::int64_t>(config.min_dim), static_cast<std::int64_t>(config.max_dim)));
}

ConeVector random_density(Rng& rng, Eigen::Index n) {
  return ConeVector(rng.log_uniform_vector(n)).normalized();
}

/// k(q^T); 1 when q^T is not a valid positive map (a zero column in q).
double transition_coefficient(const Eigen::MatrixXd& q) {
  try {
    return birkhoff_coefficient(PositiveLinearMap(q.transpose()));
  } catch (const InvalidArgument&) {
    return 1.0;
  }
}

double distance(const ConeVector& a, const ConeVector& b) {
  return hilbert_distance_measures(a, b).value_or(std::numeric_limits<double>::infinity());
}

hmm::HmmModel filter_model(const Eigen::MatrixXd& q) {
  const Eigen::Index n = q.rows();
  return hmm::HmmModel(q, Eigen::MatrixXd::Ones(n, 1),
                       ConeVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))));
}

struct RatioTrial {
  std::vector<RatioRecord> records;
  std::size_t resampled = 0;
  std::size_t excluded = 0;
};

void finish(ExperimentReport& report, std::chrono::steady_clock::time_point start) {
  report.summary = summarize(report.config.kind, report.ratios, report.trace, report.matrices,
                             report.config.tolerance);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void collect(ExperimentReport& report, std::vector<RatioTrial>& trials) {
  std::size_t excluded = 0;
  for (auto& t : trials) {
    report.resampled += t.resampled;
    excluded += t.excluded;
    for (auto& r : t.records) report.ratios.push_back(r);
  }
  report.diagnostics["excluded_pairs"] = static_cast<double>(excluded);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::orthant_nonexpansive: return "orthant-nonexpansive";
    case ExperimentKind::birkhoff_tightness: return "birkhoff-tightness";
    case ExperimentKind::hmm_forgetting: return "hmm-forgetting";
    case ExperimentKind::riccati_trace: return "riccati-trace";
    case ExperimentKind::horizon_contraction: return "horizon-contraction";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::orthant_nonexpansive, ExperimentKind::birkhoff_tightness,
                 ExperimentKind::hmm_forgetting, ExperimentKind::riccati_trace,
                 ExperimentKind::horizon_contraction}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  if (min_dim < 1 || max_dim < min_dim) throw InvalidArgument("dims must satisfy 1 <= min <= max");
  if (windows < 1) throw InvalidArgument("windows must be >= 1");
  if (pairs < 1) throw InvalidArgument("pairs must be >= 1");
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
  if (transition && likelihood && transition->rows() != likelihood->size()) {
    throw InvalidArgument("likelihood must have one entry per state of the transition matrix");
  }
  if (!transition && likelihood &&
      (static_cast<std::size_t>(likelihood->size()) != min_dim || min_dim != max_dim)) {
    throw InvalidArgument("a fixed likelihood needs min_dim == max_dim == its length");
  }
  if (kind == ExperimentKind::riccati_trace && (!model || !alt_covariance)) {
    throw InvalidArgument("riccati-trace needs a model and a second initial covariance");
  }
  if (kind == ExperimentKind::riccati_trace && alt_covariance->size() != model->state_dim()) {
    throw InvalidArgument("second initial covariance must be n x n");
  }
}

Summary summarize(ExperimentKind kind, const std::vector<RatioRecord>& ratios,
                  const std::vector<TraceRecord>& trace, const std::vector<MatrixRecord>& matrices,
                  double tolerance) {
  Summary s;
  if (kind == ExperimentKind::riccati_trace) {
    s.records = trace.size();
    for (std::size_t k = 1; k < trace.size(); ++k) {
      const double prev = trace[k - 1].thompson_distance;
      const double ratio = prev > 0.0 ? trace[k].thompson_distance / prev : 0.0;
      s.max_ratio = std::max(s.max_ratio, ratio);
      s.mean_ratio += ratio;
      if (trace[k].thompson_distance > prev + tolerance) ++s.violations;
    }
    if (trace.size() > 1) s.mean_ratio /= static_cast<double>(trace.size() - 1);
    s.pass = !trace.empty() && s.violations == 0;
    return s;
  }

  if (kind == ExperimentKind::birkhoff_tightness) {
    s.records = matrices.size();
    std::size_t eligible = 0;
    std::size_t tight = 0;
    for (const auto& m : matrices) {
      const double ratio = m.bound > 0.0 ? m.sampled_max / m.bound : 0.0;
      s.max_ratio = std::max(s.max_ratio, ratio);
      s.mean_ratio += ratio;
      if (m.sampled_max > m.bound + tolerance) ++s.violations;
      if (m.rows == 2 && m.cols == 2 && m.pairs >= kTightnessPairs) {
        ++eligible;
        if (m.sampled_max >= kTightnessFraction * m.bound) ++tight;
      }
    }
    if (!matrices.empty()) s.mean_ratio /= static_cast<double>(matrices.size());
    const bool tight_enough =
        eligible == 0 || static_cast<double>(tight) >= kTightnessShare * static_cast<double>(eligible);
    s.pass = !matrices.empty() && s.violations == 0 && tight_enough;
    return s;
  }

  s.records = ratios.size();
  for (const auto& r : ratios) {
    s.max_ratio = std::max(s.max_ratio, r.ratio);
    s.mean_ratio += r.ratio;
    if (r.ratio > r.bound + tolerance) ++s.violations;
  }
  if (!ratios.empty()) s.mean_ratio /= static_cast<double>(ratios.size());
  s.pass = s.violations == 0;
  return s;
}

ExperimentReport run_hmm_nonexpansiveness(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;

  auto trials = parallel_trials<RatioTrial>(config.trials, config.threads, [&](std::size_t t) {
    Rng rng = Rng::stream(config.seed, t);
    RatioTrial out;
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
      const Eigen::Index n = config.transition ? config.transition->rows() : sample_dim(rng, config);
      const Eigen::MatrixXd q = config.transition ? *config.transition : rng.stochastic_matrix(n, 3.0);
      const Eigen::VectorXd g = config.likelihood ? *config.likelihood : rng.log_uniform_vector(n);
      const ConeVector f(rng.log_uniform_vector(n));
      const ConeVector h(rng.log_uniform_vector(n));
      const double before = hilbert_distance_orthant(f, h).value();
      if (before < kMinRatioDistance) {
        ++out.resampled;
        continue;
      }
      const auto model = filter_model(q);
      const double after = distance(hmm::unnormalized_step(model, f, g), hmm::unnormalized_step(model, h, g));
      out.records.push_back({t, 0, before, after, after / before, 1.0});
      return out;
    }
    throw InvalidArgument("trial " + std::to_string(t) + ": no usable sample after " +
                          std::to_string(kMaxResamples) + " attempts");
  });
  collect(report, trials);
  if (config.transition) report.diagnostics["transition_coefficient"] = transition_coefficient(*config.transition);
  finish(report, start);
  return report;
}

ExperimentReport run_birkhoff_tightness(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;

  report.matrices = parallel_trials<MatrixRecord>(config.trials, config.threads, [&](std::size_t t) {
    Rng rng = Rng::stream(config.seed, t);
    Eigen::MatrixXd a;
    if (config.matrix) {
      a = *config.matrix;
    } else {
      const Eigen::Index n = sample_dim(rng, config);
      a.resize(n, n);
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) = std::exp(rng.uniform(-1.0, 1.0));
    }
    const PositiveLinearMap map(a);
    MatrixRecord rec;
    rec.trial = t;
    rec.rows = static_cast<std::size_t>(a.rows());
    rec.cols = static_cast<std::size_t>(a.cols());
    rec.diameter = projective_diameter(map);
    rec.bound = birkhoff_coefficient(rec.diameter);
    for (std::size_t p = 0; p < config.pairs; ++p) {
      const ConeVector x(rng.log_uniform_vector(a.cols()));
      const ConeVector y(rng.log_uniform_vector(a.cols()));
      const double before = hilbert_distance_orthant(x, y).value();
      if (before < kMinRatioDistance) continue;
      const double after = distance(apply_map(map, x), apply_map(map, y));
      rec.sampled_max = std::max(rec.sampled_max, after / before);
      ++rec.pairs;
    }
    return rec;
  });
  finish(report, start);
  return report;
}

ExperimentReport run_hmm_forgetting(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;

  struct ForgettingTrial : RatioTrial {
    double worst_geometric = 0.0;  // max_k d_k / (coef^k d_0)
    double coefficient = 0.0;
  };
  auto trials = parallel_trials<ForgettingTrial>(config.trials, config.threads, [&](std::size_t t) {
    Rng rng = Rng::stream(config.seed, t);
    ForgettingTrial out;
    const Eigen::Index n = config.transition ? config.transition->rows() : sample_dim(rng, config);
    const Eigen::MatrixXd q = config.transition ? *config.transition : rng.stochastic_matrix(n, 1.0);
    const auto model = filter_model(q);
    out.coefficient = transition_coefficient(q);
    auto next_likelihood = [&] { return config.likelihood ? *config.likelihood : rng.log_uniform_vector(n); };

    const ConeVector mu = random_density(rng, n);
    const ConeVector mu_alt = random_density(rng, n);
    const Eigen::VectorXd g0 = next_likelihood();
    ConeVector alpha = hmm::update(mu, g0).density;
    ConeVector alpha_alt = hmm::update(mu_alt, g0).density;
    const double d0 = distance(alpha, alpha_alt);
    double before = d0;
    for (std::size_t k = 1; k <= config.horizon; ++k) {
      const Eigen::VectorXd g = next_likelihood();
      alpha = hmm::forward_step(model, alpha, g).density;
      alpha_alt = hmm::forward_step(model, alpha_alt, g).density;
      const double after = distance(alpha, alpha_alt);
      if (before >= kMinRatioDistance) {
        out.records.push_back({t, k, before, after, after / before, out.coefficient});
        const double envelope = std::pow(out.coefficient, static_cast<double>(k)) * d0;
        if (envelope > 0.0) out.worst_geometric = std::max(out.worst_geometric, after / envelope);
      } else {
        ++out.excluded;
      }
      before = after;
    }
    return out;
  });

  double worst = 0.0;
  double coef = 0.0;
  for (const auto& t : trials) {
    worst = std::max(worst, t.worst_geometric);
    coef = std::max(coef, t.coefficient);
  }
  std::vector<RatioTrial> plain(trials.begin(), trials.end());
  collect(report, plain);
  report.diagnostics["max_transition_coefficient"] = coef;
  report.diagnostics["max_distance_over_geometric_envelope"] = worst;
  finish(report, start);
  return report;
}

ExperimentReport run_riccati_trace(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;

  const auto& model = *config.model;
  SpdMatrix p = model.p0();
  SpdMatrix p_alt = *config.alt_covariance;
  std::size_t hilbert_increases = 0;
  for (std::size_t k = 0; k <= config.horizon; ++k) {
    if (k > 0) {
      p = kalman::riccati_map_gain_form(model, p);
      p_alt = kalman::riccati_map_gain_form(model, p_alt);
    }
    TraceRecord rec{k, hilbert_distance_spd(p, p_alt).value(), thompson_distance_spd(p, p_alt)};
    if (k > 0 && rec.hilbert_distance > report.trace.back().hilbert_distance + config.tolerance) {
      ++hilbert_increases;
    }
    report.trace.push_back(rec);
  }
  report.diagnostics["hilbert_increases"] = static_cast<double>(hilbert_increases);
  report.diagnostics["terminal_hilbert_distance"] = report.trace.back().hilbert_distance;
  report.diagnostics["terminal_thompson_distance"] = report.trace.back().thompson_distance;
  finish(report, start);
  return report;
}

std::optional<int> primitivity_exponent(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd pattern = (m.array() > 0.0).cast<double>();
  Eigen::MatrixXd power = pattern;
  const Eigen::Index limit = (n - 1) * (n - 1) + 1;
  for (Eigen::Index p = 1; p <= limit; ++p) {
    if ((power.array() > 0.0).all()) return static_cast<int>(p);
    power = ((power * pattern).array() > 0.0).cast<double>();
  }
  return std::nullopt;
}

ExperimentReport run_horizon_contraction(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;

  struct HorizonTrial : RatioTrial {
    double step_coefficient = 0.0;
    bool primitive = false;
  };
  auto trials = parallel_trials<HorizonTrial>(config.trials, config.threads, [&](std::size_t t) {
    Rng rng = Rng::stream(config.seed, t);
    HorizonTrial out;
    const Eigen::Index n = config.transition ? config.transition->rows() : sample_dim(rng, config);
    const Eigen::MatrixXd q = config.transition ? *config.transition : rng.stochastic_matrix(n, 1.0);
    const auto model = filter_model(q);
    out.step_coefficient = transition_coefficient(q);
    out.primitive = primitivity_exponent(q).has_value();

    ConeVector alpha = random_density(rng, n);
    ConeVector alpha_alt = random_density(rng, n);
    for (std::size_t w = 0; w < config.windows; ++w) {
      const double before = distance(alpha, alpha_alt);
      Eigen::MatrixXd window = Eigen::MatrixXd::Identity(n, n);
      for (std::size_t s = 0; s < config.horizon; ++s) {
        const Eigen::VectorXd g = config.likelihood ? *config.likelihood : rng.log_uniform_vector(n);
        alpha = hmm::forward_step(model, alpha, g).density;
        alpha_alt = hmm::forward_step(model, alpha_alt, g).density;
        window = g.asDiagonal() * (q.transpose() * window);
        window /= window.maxCoeff();
      }
      const double after = distance(alpha, alpha_alt);
      double bound = 1.0;
      try {
        bound = birkhoff_coefficient(PositiveLinearMap(window));
      } catch (const InvalidArgument&) {
      }
      if (before >= kMinRatioDistance && std::isfinite(before)) {
        out.records.push_back({t, w, before, after, after / before, bound});
      } else {
        ++out.excluded;
      }
    }
    return out;
  });

  double step_coef = 0.0;
  bool all_primitive = true;
  for (const auto& t : trials) {
    step_coef = std::max(step_coef, t.step_coefficient);
    all_primitive = all_primitive && t.primitive;
  }
  std::vector<RatioTrial> plain(trials.begin(), trials.end());
  collect(report, plain);
  double window_coef = 0.0;
  double empirical = 0.0;
  for (const auto& r : report.ratios) {
    window_coef = std::max(window_coef, r.bound);
    empirical = std::max(empirical, r.ratio);
  }
  report.diagnostics["per_step_coefficient"] = step_coef;
  report.diagnostics["product_bound"] = std::pow(step_coef, static_cast<double>(config.horizon));
  report.diagnostics["window_coefficient"] = window_coef;
  report.diagnostics["empirical_window_coefficient"] = empirical;
  report.diagnostics["primitive"] = all_primitive ? 1.0 : 0.0;
  finish(report, start);
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::orthant_nonexpansive: return run_hmm_nonexpansiveness(config);
    case ExperimentKind::birkhoff_tightness: return run_birkhoff_tightness(config);
    case ExperimentKind::hmm_forgetting: return run_hmm_forgetting(config);
    case ExperimentKind::riccati_trace: return run_riccati_trace(config);
    case ExperimentKind::horizon_contraction: return run_horizon_contraction(config);
  }
  throw InvalidArgument("unknown experiment kind");
}

}  // namespace hf::lab
