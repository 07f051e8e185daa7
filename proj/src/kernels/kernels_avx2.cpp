// Compiled with -mavx2 (and without -mfma); only reached after a CPUID check.

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <algorithm>

namespace hf::kernels::detail {

namespace {

double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

double hmin(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
}

}  // namespace

RatioBounds ratio_bounds_avx2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  double hi = x[0] / y[0];
  double lo = hi;
  if (n >= 4) {
    __m256d vhi = _mm256_div_pd(_mm256_loadu_pd(x.data()), _mm256_loadu_pd(y.data()));
    __m256d vlo = vhi;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d r = _mm256_div_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
      vhi = _mm256_max_pd(vhi, r);
      vlo = _mm256_min_pd(vlo, r);
    }
    hi = hmax(vhi);
    lo = hmin(vlo);
  }
  for (; i < n; ++i) {
    const double r = x[i] / y[i];
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return {hi, lo};
}

void matvec_avx2(std::span<const double> a, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  double* o = out.data();
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a.data() + j * rows;
    const __m256d xj = _mm256_set1_pd(x[j]);
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
      const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(col + i), xj);
      _mm256_storeu_pd(o + i, _mm256_add_pd(_mm256_loadu_pd(o + i), prod));
    }
    for (; i < rows; ++i) {
      const double prod = col[i] * x[j];
      o[i] = o[i] + prod;
    }
  }
}

void hadamard_avx2(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

double blocked_sum_avx2(std::span<const double> x) {
  const std::size_t blocks = x.size() / 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t b = 0; b < blocks; ++b) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + 4 * b));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = 4 * blocks; i < x.size(); ++i) total += x[i];
  return total;
}

void divide_avx2(std::span<const double> x, double divisor, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d d = _mm256_set1_pd(divisor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_loadu_pd(x.data() + i), d));
  }
  for (; i < n; ++i) out[i] = x[i] / divisor;
}

}  // namespace hf::kernels::detail
