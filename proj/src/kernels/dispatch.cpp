#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tnrg/errors.hpp"
#include "tnrg/kernels.hpp"

namespace tnrg::kernels {
namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::gemm, &scalar::dot,
                              &scalar::sum_squares};
#if defined(TNRG_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::gemm, &avx2::dot, &avx2::sum_squares};
#endif

const KernelTable* initial_table() {
  const char* forced = std::getenv("TNRG_KERNEL");
  if (forced != nullptr) {
    const std::string name(forced);
    if (name == "scalar") return &kScalar;
#if defined(TNRG_HAVE_AVX2)
    if (name == "avx2" && isa_available(Isa::avx2)) return &kAvx2;
#endif
  }
#if defined(TNRG_HAVE_AVX2)
  if (isa_available(Isa::avx2)) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(TNRG_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa))
    throw Error(ErrorCategory::configuration,
                "kernel ISA not available: " + std::string(isa_name(isa)));
#if defined(TNRG_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) { current().store(&table(isa)); }

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace tnrg::kernels
