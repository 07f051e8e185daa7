#include "hf/positive_maps.hpp"

#include "hf/kernels.hpp"
#include "hf/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hf {

PositiveLinearMap::PositiveLinearMap(Eigen::MatrixXd entries) : a_(std::move(entries)) {
  if (a_.rows() < 1 || a_.cols() < 1) throw DimensionMismatch("positive map must be nonempty");
  if (!a_.allFinite()) throw InvalidArgument("positive map has a non-finite entry");
  if ((a_.array() < 0.0).any()) throw InvalidArgument("positive map has a negative entry");
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    if ((a_.row(i).array() == 0.0).all()) {
      throw InvalidArgument("positive map row " + std::to_string(i) + " is identically zero");
    }
  }
}

ConeVector apply_map(const PositiveLinearMap& a, const ConeVector& x) {
  if (static_cast<std::size_t>(a.cols()) != x.dim()) {
    throw DimensionMismatch("apply_map: matrix has " + std::to_string(a.cols()) +
                            " columns, vector has dimension " + std::to_string(x.dim()));
  }
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());
  Eigen::VectorXd out(a.rows());
  kernels::active().matvec({a.matrix().data(), rows * cols}, rows, cols, x.span(),
                           {out.data(), rows});
  return ConeVector(std::move(out));
}

ExtendedDistance projective_diameter(const PositiveLinearMap& a) {
  const Eigen::MatrixXd& m = a.matrix();
  const Eigen::Index n = m.cols();
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto& k = kernels::active();
  const bool strict = a.is_strictly_positive();

  double diameter = 0.0;
  for (Eigen::Index p = 0; p < n; ++p) {
    if (!strict && (m.col(p).array() == 0.0).all()) continue;
    for (Eigen::Index q = p + 1; q < n; ++q) {
      if (strict) {
        const auto b = k.ratio_bounds({m.col(p).data(), rows}, {m.col(q).data(), rows});
        diameter = std::max(diameter, std::log(b.max_ratio / b.min_ratio));
        continue;
      }
      if ((m.col(q).array() == 0.0).all()) continue;
      const ExtendedDistance d = hilbert_distance_measures(ConeVector(m.col(p)), ConeVector(m.col(q)));
      if (d.is_infinite()) return d;
      diameter = std::max(diameter, d.value());
    }
  }
  return ExtendedDistance::finite(diameter);
}

double birkhoff_coefficient(const ExtendedDistance& diameter) {
  if (diameter.is_infinite()) return 1.0;
  return std::tanh(diameter.value() / 4.0);
}

double birkhoff_coefficient(const PositiveLinearMap& a) {
  return birkhoff_coefficient(projective_diameter(a));
}

ContractionReport empirical_contraction_ratio(const PositiveLinearMap& a, std::size_t trials,
                                              std::uint64_t seed) {
  if (trials == 0) throw InvalidArgument("empirical contraction ratio needs trials >= 1");
  ContractionReport report;
  report.trials = trials;
  report.seed = seed;
  report.birkhoff_bound = birkhoff_coefficient(a);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t);
    const ConeVector x(rng.log_uniform_vector(a.cols()));
    const ConeVector y(rng.log_uniform_vector(a.cols()));
    const double before = hilbert_distance_orthant(x, y).value();
    if (before < kMinRatioDistance) continue;
    const double after = hilbert_distance_measures(apply_map(a, x), apply_map(a, y)).value();
    report.observed_max_ratio = std::max(report.observed_max_ratio, after / before);
    ++report.counted;
  }
  return report;
}

}  // namespace hf
