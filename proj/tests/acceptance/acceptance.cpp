// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hf/contraction_lab.hpp"
#include "hf/gaussian_inference.hpp"
#include "hf/kalman.hpp"
#include "hf/model_io.hpp"
#include "hf/positive_maps.hpp"
#include "hf/random.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace hf;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// --- 1 ----------------------------------------------------------------------

Outcome nonexpansiveness() {
  const auto start = Clock::now();
  lab::ExperimentConfig c;
  c.kind = lab::ExperimentKind::orthant_nonexpansive;
  c.seed = 20240101;
  c.trials = 10000;
  c.min_dim = 2;
  c.max_dim = 10;
  c.tolerance = 1e-9;
  const auto report = lab::run_experiment(c);
  const double elapsed = seconds_since(start);
  const bool pass = report.ratios.size() >= 10000 && report.summary.max_ratio <= 1.0 + 1e-9 && elapsed < 10.0;
  return {pass, fmt("max ratio %.12f over %zu tuples (dims 2-10), %.2f s (limit 10 s)", report.summary.max_ratio,
                    report.ratios.size(), elapsed)};
}

// --- 2 ----------------------------------------------------------------------

Outcome birkhoff_bound() {
  const auto start = Clock::now();
  lab::ExperimentConfig mixed;
  mixed.kind = lab::ExperimentKind::birkhoff_tightness;
  mixed.seed = 777;
  mixed.trials = 100;
  mixed.min_dim = 2;
  mixed.max_dim = 6;
  mixed.pairs = 100000;
  mixed.threads = 0;
  mixed.tolerance = 1e-9;
  lab::ExperimentConfig square = mixed;
  square.seed = 778;
  square.min_dim = square.max_dim = 2;

  std::size_t matrices = 0, violations = 0, eligible = 0, tight = 0;
  double worst_excess = -1.0;
  for (const auto& cfg : {mixed, square}) {
    const auto report = lab::run_experiment(cfg);
    for (const auto& m : report.matrices) {
      ++matrices;
      worst_excess = std::max(worst_excess, m.sampled_max - m.bound);
      if (m.sampled_max > m.bound + 1e-9) ++violations;
      if (m.rows == 2 && m.cols == 2 && m.pairs >= 100000) {
        ++eligible;
        if (m.sampled_max >= 0.95 * m.bound) ++tight;
      }
    }
  }
  const double elapsed = seconds_since(start);
  const double share = eligible > 0 ? static_cast<double>(tight) / static_cast<double>(eligible) : 0.0;
  const bool pass = matrices >= 100 && violations == 0 && eligible > 0 && share >= 0.90 && elapsed < 60.0;
  return {pass, fmt("%zu matrices, %zu bound violations (max sampled - bound %.3e), 2x2 tight share %zu/%zu = %.3f, "
                    "%.2f s (limit 60 s)",
                    matrices, violations, worst_excess, tight, eligible, share, elapsed)};
}

// --- 3 ----------------------------------------------------------------------

Outcome exact_values() {
  const double d = hilbert_distance_orthant({1, 2}, {2, 1}).value();
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const double k = birkhoff_coefficient(PositiveLinearMap(a));
  const double expected_root = oracle::positive_root(1.0, -1.0);
  const double p = kalman::dare_fixed_point(testing::scalar_model(), 1e-13, 1000).covariance.matrix()(0, 0);
  const double e1 = std::abs(d - std::log(4.0));
  const double e2 = std::abs(k - 1.0 / 3.0);
  const double e3 = std::abs(p - expected_root);
  return {e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-10,
          fmt("|d_H - log 4| = %.2e, |k - 1/3| = %.2e, |P* - (sqrt5-1)/2| = %.2e", e1, e2, e3)};
}

// --- 4 ----------------------------------------------------------------------

std::vector<Eigen::VectorXd> simulate(const kalman::LinearGaussianModel& model, Rng& rng, std::size_t steps) {
  const Eigen::MatrixXd lg = model.gamma().cholesky().matrixL();
  const Eigen::MatrixXd ls = model.sigma().cholesky().matrixL();
  const Eigen::MatrixXd lp = model.p0().cholesky().matrixL();
  auto noise = [&](Eigen::Index n) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = rng.normal();
    return w;
  };
  Eigen::VectorXd x = model.mu0() + lp * noise(model.state_dim());
  std::vector<Eigen::VectorXd> ys;
  for (std::size_t k = 0; k < steps; ++k) {
    if (k > 0) x = model.a() * x + lg * noise(model.state_dim());
    ys.push_back(model.c() * x + ls * noise(model.obs_dim()));
  }
  return ys;
}

Outcome kalman_equivalence() {
  const auto start = Clock::now();
  Rng rng(4242);
  double mean_dev = 0.0, cov_dev = 0.0;
  std::size_t models = 0;
  for (; models < 60; ++models) {
    const auto n = rng.integer(1, 5);
    const auto m = rng.integer(1, 3);
    const auto model = testing::linear_gaussian_model(rng, n, m, rng.uniform(0.3, 1.05));
    const auto horizon = static_cast<std::size_t>(rng.integer(1, 50));
    const auto r = kalman::kalman_vs_hmm_equivalence(model, simulate(model, rng, horizon));
    mean_dev = std::max(mean_dev, r.max_mean_deviation);
    cov_dev = std::max(cov_dev, r.max_covariance_deviation);
  }
  const double elapsed = seconds_since(start);
  return {mean_dev <= 1e-9 && cov_dev <= 1e-9 && elapsed < 30.0,
          fmt("%zu models (n<=5, m<=3, horizon<=50): max mean deviation %.2e, max covariance deviation %.2e, "
              "%.2f s (limit 30 s)",
              models, mean_dev, cov_dev, elapsed)};
}

// --- 5 ----------------------------------------------------------------------

Outcome riccati_forms() {
  Rng rng(555);
  double worst = 0.0;
  std::size_t inputs = 0;
  for (; inputs < 1000; ++inputs) {
    const auto n = rng.integer(1, 6);
    const auto model = testing::linear_gaussian_model(rng, n, rng.integer(1, 3), rng.uniform(0.1, 2.0));
    const SpdMatrix p = testing::spd(rng, n);
    const Eigen::MatrixXd g = kalman::riccati_map_gain_form(model, p).matrix();
    const Eigen::MatrixXd i = kalman::riccati_map_information_form(model, p).matrix();
    worst = std::max(worst, (g - i).norm() / i.norm());
  }
  return {worst <= 1e-10, fmt("%zu PD inputs (dims 1-6): max relative Frobenius gap %.2e", inputs, worst)};
}

// --- 6 ----------------------------------------------------------------------

Outcome scaling_invariance() {
  Rng rng(66);
  auto scale = [&] { return std::exp(rng.uniform(std::log(1e-6), std::log(1e6))); };
  double orthant = 0.0, spd = 0.0, measure = 0.0;
  bool support_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = rng.integer(1, 8);
    const auto x = testing::positive_vector(rng, n);
    const auto y = testing::positive_vector(rng, n);
    const double lambda = scale(), mu = scale();
    orthant = std::max(orthant, std::abs(hilbert_distance_orthant(ConeVector(lambda * x.entries()),
                                                                  ConeVector(mu * y.entries()))
                                             .value() -
                                         hilbert_distance_orthant(x, y).value()));

    const auto m = rng.integer(1, 6);
    const SpdMatrix xs = testing::spd(rng, m);
    const SpdMatrix ys = testing::spd(rng, m);
    spd = std::max(spd, std::abs(hilbert_distance_spd(SpdMatrix(lambda * xs.matrix()), SpdMatrix(mu * ys.matrix()))
                                     .value() -
                                 hilbert_distance_spd(xs, ys).value()));

    Eigen::VectorXd mx = x.entries(), my = y.entries();
    if (n > 1 && trial % 2 == 0) {
      const auto zero = rng.integer(0, n - 1);
      mx[zero] = 0.0;
      if (trial % 4 == 0) my[zero] = 0.0;
    }
    const ConeVector a(mx), b(my);
    const auto base = hilbert_distance_measures(a, b);
    const auto scaled = hilbert_distance_measures(ConeVector(lambda * mx), ConeVector(mu * my));
    if (base.is_infinite() || scaled.is_infinite()) {
      support_ok = support_ok && base.is_infinite() && scaled.is_infinite();
    } else {
      measure = std::max(measure, std::abs(scaled.value() - base.value()));
    }
  }
  return {orthant <= 1e-12 && spd <= 1e-12 && measure <= 1e-12 && support_ok,
          fmt("max |d_H(lx, my) - d_H(x, y)|: orthant %.2e, spd %.2e, measure %.2e; infinite cases %s", orthant, spd,
              measure, support_ok ? "preserved" : "CHANGED")};
}

// --- 7 ----------------------------------------------------------------------

Outcome riccati_trace() {
  lab::ExperimentConfig c;
  c.kind = lab::ExperimentKind::riccati_trace;
  c.seed = 1;
  c.horizon = 30;
  c.model = testing::scalar_model(1, 1, 1, 1, 0, 0.1);
  c.alt_covariance = SpdMatrix::scalar(10.0);
  const auto report = lab::run_experiment(c);
  const double step1 = std::log(oracle::scalar_riccati(10.0) / oracle::scalar_riccati(0.1));
  const double e0 = std::abs(report.trace[0].hilbert_distance - std::log(100.0));
  const double e1 = std::abs(report.trace[1].hilbert_distance - std::log(1.75));
  const double oracle_gap = std::abs(step1 - std::log(1.75));
  const double terminal = report.trace[30].thompson_distance;
  return {e0 <= 1e-12 && e1 <= 1e-10 && oracle_gap <= 1e-12 && terminal <= 1e-8,
          fmt("d_H step 0 = %.6f (target log 100, err %.2e), d_H step 1 = %.6f (target log 1.75, err %.2e); "
              "Thompson step 0 = %.6f, step 1 = %.6f, step 30 = %.2e (limit 1e-8)",
              report.trace[0].hilbert_distance, e0, report.trace[1].hilbert_distance, e1,
              report.trace[0].thompson_distance, report.trace[1].thompson_distance, terminal)};
}

// --- 8 ----------------------------------------------------------------------

Outcome gaussian_trichotomy() {
  Rng rng(88);
  std::size_t zeros = 0, infinite = 0, wrong = 0, finite_positive = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = rng.integer(1, 4);
    Eigen::VectorXd mean(n);
    for (Eigen::Index i = 0; i < n; ++i) mean[i] = rng.normal() * 3.0;
    const SpdMatrix cov = testing::spd(rng, n);
    const gauss::GaussianDist f(mean, cov);

    Eigen::VectorXd mean2 = mean;
    Eigen::MatrixXd cov2 = cov.matrix();
    bool coincide = true;
    switch (trial % 4) {
      case 0: break;
      case 1: mean2 *= 1.0 + 1e-15; break;  // rounding-level perturbation
      case 2: {
        const auto i = rng.integer(0, n - 1);
        mean2[i] += std::exp(rng.uniform(std::log(1e-8), std::log(10.0)));
        coincide = false;
        break;
      }
      default: {
        cov2 *= 1.0 + std::exp(rng.uniform(std::log(1e-8), std::log(10.0)));
        coincide = false;
        break;
      }
    }
    const auto d = gauss::gaussian_hilbert_comparability(f, gauss::GaussianDist(mean2, SpdMatrix(cov2)));
    if (d.is_finite() && d.value() != 0.0) ++finite_positive;
    if (d.is_finite() && d.value() == 0.0) ++zeros;
    if (d.is_infinite()) ++infinite;
    if (coincide != (d.is_finite() && d.value() == 0.0)) ++wrong;
  }
  return {wrong == 0 && finite_positive == 0,
          fmt("1000 pairs: %zu zero, %zu infinite, %zu finite positive, %zu misclassified", zeros, infinite,
              finite_positive, wrong)};
}

// --- 9 ----------------------------------------------------------------------

Outcome determinism() {
  std::vector<lab::ExperimentConfig> configs;
  auto base = [](lab::ExperimentKind kind) {
    lab::ExperimentConfig c;
    c.kind = kind;
    c.seed = 9090;
    c.trials = 64;
    c.min_dim = 2;
    c.max_dim = 6;
    c.horizon = 5;
    c.pairs = 500;
    return c;
  };
  configs.push_back(base(lab::ExperimentKind::orthant_nonexpansive));
  configs.push_back(base(lab::ExperimentKind::birkhoff_tightness));
  configs.push_back(base(lab::ExperimentKind::hmm_forgetting));
  configs.push_back(base(lab::ExperimentKind::horizon_contraction));
  auto riccati = base(lab::ExperimentKind::riccati_trace);
  Rng rng(9);
  riccati.model = testing::linear_gaussian_model(rng, 3, 2);
  riccati.alt_covariance = testing::spd(rng, 3);
  riccati.horizon = 40;
  configs.push_back(riccati);

  std::size_t identical = 0;
  for (auto c : configs) {
    c.threads = 1;
    const std::string first = io::report_body_json(lab::run_experiment(c)).dump();
    const std::string again = io::report_body_json(lab::run_experiment(c)).dump();
    c.threads = 8;
    const std::string threaded = io::report_body_json(lab::run_experiment(c)).dump();
    // Threads are not part of the serialized config, so the bodies compare directly.
    if (first == again && first == threaded) ++identical;
  }
  return {identical == configs.size(),
          fmt("%zu/%zu experiment kinds byte-identical across reruns and thread counts", identical, configs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"non-expansiveness of the filtering step", nonexpansiveness},
      {"Birkhoff contraction bound", birkhoff_bound},
      {"exact reference values", exact_values},
      {"Kalman filter equals Gaussian forward recursion", kalman_equivalence},
      {"gain and information forms of the Riccati map", riccati_forms},
      {"scaling invariance on all cones", scaling_invariance},
      {"Riccati trace on the scalar model", riccati_trace},
      {"Gaussian comparability trichotomy", gaussian_trichotomy},
      {"determinism of lab reports", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
