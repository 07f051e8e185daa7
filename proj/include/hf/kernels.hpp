#pragma once

// Data-parallel inner loops shared by the orthant-cone code paths.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. The AVX2 variants use the same per-element
// operation order as the scalar ones and never fuse multiply-add, so both
// backends produce bitwise identical results.

#include <cstddef>
#include <span>
#include <string_view>

namespace hf::kernels {

enum class Backend { scalar, avx2 };

struct RatioBounds {
  double max_ratio;
  double min_ratio;
};

/// Function table for one backend.
struct KernelTable {
  Backend backend;
  std::string_view name;

  /// max_i x_i / y_i and min_i x_i / y_i. Requires x.size() == y.size() >= 1.
  RatioBounds (*ratio_bounds)(std::span<const double> x, std::span<const double> y);

  /// out = A x for a column-major rows x cols matrix, accumulated column by
  /// column (out_i += A_ij * x_j for j = 0, 1, ...).
  void (*matvec)(std::span<const double> a_colmajor, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> out);

  /// out_i = a_i * b_i
  void (*hadamard)(std::span<const double> a, std::span<const double> b, std::span<double> out);

  /// Sum with four interleaved accumulators combined as (s0 + s1) + (s2 + s3),
  /// then the tail added left to right.
  double (*blocked_sum)(std::span<const double> x);

  /// out_i = x_i / divisor
  void (*divide)(std::span<const double> x, double divisor, std::span<double> out);
};

const KernelTable& scalar_table();

/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

bool avx2_available();

/// Table used by the library. Defaults to the best available backend.
const KernelTable& active();

/// Forces a backend; returns false (and leaves the selection untouched) when
/// the requested backend is unavailable.
bool select(Backend backend);

}  // namespace hf::kernels
