#include "hf/hmm_filter.hpp"

#include "hf/kernels.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace hf::hmm {

namespace {

std::string shortest(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::span<const double> likelihood_span(const Eigen::VectorXd& g) {
  return {g.data(), static_cast<std::size_t>(g.size())};
}

void check_likelihood(const Eigen::VectorXd& g, Eigen::Index n) {
  if (g.size() != n) {
    throw DimensionMismatch("likelihood has " + std::to_string(g.size()) + " entries, model has " +
                            std::to_string(n) + " states");
  }
  if (!g.allFinite() || (g.array() < 0.0).any()) {
    throw InvalidArgument("likelihood entries must be finite and nonnegative");
  }
}

Eigen::VectorXd propagate(const HmmModel& model, const ConeVector& f) {
  if (static_cast<Eigen::Index>(f.dim()) != model.states()) {
    throw DimensionMismatch("density dimension " + std::to_string(f.dim()) +
                            " does not match model with " + std::to_string(model.states()) +
                            " states");
  }
  const auto n = static_cast<std::size_t>(model.states());
  Eigen::VectorXd out(model.states());
  kernels::active().matvec({model.transition_transposed().data(), n * n}, n, n, f.span(),
                           {out.data(), n});
  return out;
}

}  // namespace

HmmModel::HmmModel(Eigen::MatrixXd transition, Eigen::MatrixXd emission, ConeVector initial)
    : transition_(std::move(transition)),
      emission_(std::move(emission)),
      initial_(std::move(initial)) {
  const Eigen::Index n = transition_.rows();
  if (n < 1 || transition_.cols() != n) throw DimensionMismatch("transition must be square and nonempty");
  if (!transition_.allFinite()) throw InvalidArgument("transition has a non-finite entry");
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((transition_.row(i).array() < 0.0).any()) {
      throw InvalidArgument("transition row " + std::to_string(i) + " has a negative entry");
    }
    const double s = transition_.row(i).sum();
    if (std::abs(s - 1.0) > kStochasticTol) {
      throw InvalidArgument("transition row " + std::to_string(i) + " sums to " + shortest(s) +
                            ", expected 1");
    }
  }
  if (emission_.rows() != n || emission_.cols() < 1) {
    throw DimensionMismatch("emission must have one row per state and at least one column");
  }
  if (!emission_.allFinite() || (emission_.array() < 0.0).any()) {
    throw InvalidArgument("emission entries must be finite and nonnegative");
  }
  for (Eigen::Index y = 0; y < emission_.cols(); ++y) {
    if ((emission_.col(y).array() == 0.0).all()) {
      throw InvalidArgument("emission column " + std::to_string(y) + " is zero in every state");
    }
  }
  if (static_cast<Eigen::Index>(initial_.dim()) != n) {
    throw DimensionMismatch("initial density must have one entry per state");
  }
  if (std::abs(initial_.entries().sum() - 1.0) > kStochasticTol) {
    throw InvalidArgument("initial density sums to " + shortest(initial_.entries().sum()) +
                          ", expected 1");
  }
  transition_t_ = transition_.transpose();
}

Eigen::VectorXd HmmModel::likelihood(std::size_t symbol) const {
  if (static_cast<Eigen::Index>(symbol) >= emission_.cols()) {
    throw InvalidArgument("observation symbol " + std::to_string(symbol) + " outside alphabet of size " +
                          std::to_string(emission_.cols()));
  }
  return emission_.col(static_cast<Eigen::Index>(symbol));
}

FilterStep update(const ConeVector& alpha_pred, const Eigen::VectorXd& likelihood) {
  check_likelihood(likelihood, static_cast<Eigen::Index>(alpha_pred.dim()));
  const auto& k = kernels::active();
  const std::size_t n = alpha_pred.dim();
  Eigen::VectorXd joint(static_cast<Eigen::Index>(n));
  k.hadamard(likelihood_span(likelihood), alpha_pred.span(), {joint.data(), n});
  const double normalizer = k.blocked_sum({joint.data(), n});
  if (!(normalizer > 0.0)) throw ImpossibleObservation(std::nullopt);
  k.divide({joint.data(), n}, normalizer, {joint.data(), n});
  return {ConeVector(std::move(joint)), std::log(normalizer)};
}

FilterStep initialize(const HmmModel& model, const Eigen::VectorXd& likelihood) {
  return update(model.initial(), likelihood);
}

FilterStep initialize(const HmmModel& model, std::size_t y0) {
  return initialize(model, model.likelihood(y0));
}

ConeVector predict(const HmmModel& model, const ConeVector& alpha) {
  const double mass = alpha.total();
  if (std::abs(mass - 1.0) > kStochasticTol) {
    throw InvalidArgument("predict expects a probability vector; mass is " + shortest(mass));
  }
  return ConeVector(propagate(model, alpha));
}

FilterStep forward_step(const HmmModel& model, const ConeVector& alpha,
                        const Eigen::VectorXd& likelihood) {
  return update(predict(model, alpha), likelihood);
}

FilterStep forward_step(const HmmModel& model, const ConeVector& alpha, std::size_t y) {
  return forward_step(model, alpha, model.likelihood(y));
}

ConeVector unnormalized_step(const HmmModel& model, const ConeVector& f,
                             const Eigen::VectorXd& likelihood) {
  check_likelihood(likelihood, model.states());
  Eigen::VectorXd out = propagate(model, f);
  const std::size_t n = f.dim();
  kernels::active().hadamard(likelihood_span(likelihood), {out.data(), n}, {out.data(), n});
  return ConeVector(std::move(out));
}

ConeVector unnormalized_step(const HmmModel& model, const ConeVector& f, std::size_t y) {
  return unnormalized_step(model, f, model.likelihood(y));
}

double FilterTrace::log_likelihood() const {
  return std::accumulate(log_likelihood_increments.begin(), log_likelihood_increments.end(), 0.0);
}

namespace {

template <typename Obs, typename Lik>
FilterTrace run(const HmmModel& model, std::span<const Obs> observations, Lik&& likelihood_of) {
  if (observations.empty()) throw InvalidArgument("filter_sequence needs at least one observation");
  FilterTrace trace;
  trace.densities.reserve(observations.size());
  trace.log_likelihood_increments.reserve(observations.size());
  for (std::size_t k = 0; k < observations.size(); ++k) {
    try {
      const Eigen::VectorXd g = likelihood_of(observations[k]);
      FilterStep step = k == 0 ? initialize(model, g) : forward_step(model, trace.densities.back(), g);
      trace.densities.push_back(std::move(step.density));
      trace.log_likelihood_increments.push_back(step.log_normalizer);
    } catch (const ImpossibleObservation&) {
      throw ImpossibleObservation(k);
    }
  }
  return trace;
}

}  // namespace

FilterTrace filter_sequence(const HmmModel& model, std::span<const std::size_t> observations) {
  return run(model, observations, [&](std::size_t y) { return model.likelihood(y); });
}

FilterTrace filter_sequence(const HmmModel& model, std::span<const Eigen::VectorXd> likelihoods) {
  return run(model, likelihoods, [](const Eigen::VectorXd& g) { return g; });
}

}  // namespace hf::hmm
