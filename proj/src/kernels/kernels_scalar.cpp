#include "kernels_impl.hpp"

#include <algorithm>

namespace hf::kernels::detail {

RatioBounds ratio_bounds_scalar(std::span<const double> x, std::span<const double> y) {
  double hi = x[0] / y[0];
  double lo = hi;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double r = x[i] / y[i];
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return {hi, lo};
}

void matvec_scalar(std::span<const double> a, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    const double* col = a.data() + j * rows;
    for (std::size_t i = 0; i < rows; ++i) {
      const double prod = col[i] * xj;
      out[i] = out[i] + prod;
    }
  }
}

void hadamard_scalar(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

double blocked_sum_scalar(std::span<const double> x) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocks = x.size() / 4;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t lane = 0; lane < 4; ++lane) s[lane] += x[4 * b + lane];
  }
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = 4 * blocks; i < x.size(); ++i) total += x[i];
  return total;
}

void divide_scalar(std::span<const double> x, double divisor, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / divisor;
}

}  // namespace hf::kernels::detail
