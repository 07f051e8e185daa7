#include "kernels_impl.hpp"

#include <atomic>

namespace hf::kernels {

namespace {

constexpr KernelTable kScalar{
    Backend::scalar,        "scalar",
    detail::ratio_bounds_scalar, detail::matvec_scalar,
    detail::hadamard_scalar,     detail::blocked_sum_scalar,
    detail::divide_scalar,
};

#if defined(HF_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2{
    Backend::avx2,        "avx2",
    detail::ratio_bounds_avx2, detail::matvec_avx2,
    detail::hadamard_avx2,     detail::blocked_sum_avx2,
    detail::divide_avx2,
};
#endif

bool cpu_has_avx2() {
#if defined(HF_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* best_table() {
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& selected() {
  static std::atomic<const KernelTable*> table{best_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(HF_HAVE_AVX2_KERNELS)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

bool avx2_available() { return avx2_table() != nullptr; }

const KernelTable& active() { return *selected().load(std::memory_order_acquire); }

bool select(Backend backend) {
  const KernelTable* t = backend == Backend::scalar ? &kScalar : avx2_table();
  if (t == nullptr) return false;
  selected().store(t, std::memory_order_release);
  return true;
}

}  // namespace hf::kernels
