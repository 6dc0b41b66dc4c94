#pragma once
// Data-parallel inner loops of the contraction engine.
//
// Every kernel exists as a scalar reference and (on x86-64) an AVX2/FMA
// variant. The active variant is picked once at startup from CPUID and can be
// forced with TNRG_KERNEL=scalar|avx2. Both variants follow the same
// per-element accumulation order, so their results are bit-identical:
//
//   gemm:         c[i][j] = fma(a[i][k-1], b[k-1][j], ... fma(a[i][0], b[0][j], 0.0))
//                 i.e. one FMA chain per output element, ascending k.
//   dot / sumsq:  four partial sums; element p goes into partial (p mod 4) by
//                 FMA, in ascending p; result = (s0 + s1) + (s2 + s3).

#include <cstddef>
#include <string_view>

namespace tnrg::kernels {

enum class Isa { scalar, avx2 };

/// Row-major C (m x n) = A (m x k) * B (k x n). C is overwritten.
using GemmFn = void (*)(const double* a, const double* b, double* c,
                        std::size_t m, std::size_t n, std::size_t k);
using DotFn = double (*)(const double* x, const double* y, std::size_t n);
using SumSquaresFn = double (*)(const double* x, std::size_t n);

struct KernelTable {
  Isa isa;
  GemmFn gemm;
  DotFn dot;
  SumSquaresFn sum_squares;
};

bool isa_available(Isa isa) noexcept;
const KernelTable& table(Isa isa);
const KernelTable& active() noexcept;
/// Switch the process-wide kernel set. Throws if the ISA is not available.
void select(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

inline void gemm(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t n, std::size_t k) {
  active().gemm(a, b, c, m, n, k);
}
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double sum_squares(const double* x, std::size_t n) {
  return active().sum_squares(x, n);
}

namespace scalar {
void gemm(const double* a, const double* b, double* c, std::size_t m,
          std::size_t n, std::size_t k);
double dot(const double* x, const double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace scalar

#if defined(TNRG_HAVE_AVX2)
namespace avx2 {
void gemm(const double* a, const double* b, double* c, std::size_t m,
          std::size_t n, std::size_t k);
double dot(const double* x, const double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace tnrg::kernels
