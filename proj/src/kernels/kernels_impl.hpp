#pragma once

#include "hf/kernels.hpp"

namespace hf::kernels::detail {

RatioBounds ratio_bounds_scalar(std::span<const double> x, std::span<const double> y);
void matvec_scalar(std::span<const double> a, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> out);
void hadamard_scalar(std::span<const double> a, std::span<const double> b, std::span<double> out);
double blocked_sum_scalar(std::span<const double> x);
void divide_scalar(std::span<const double> x, double divisor, std::span<double> out);

#if defined(HF_HAVE_AVX2_KERNELS)
RatioBounds ratio_bounds_avx2(std::span<const double> x, std::span<const double> y);
void matvec_avx2(std::span<const double> a, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> out);
void hadamard_avx2(std::span<const double> a, std::span<const double> b, std::span<double> out);
double blocked_sum_avx2(std::span<const double> x);
void divide_avx2(std::span<const double> x, double divisor, std::span<double> out);
#endif

}  // namespace hf::kernels::detail
