// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include "tnrg/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace tnrg::kernels::avx2 {
namespace {

constexpr std::size_t kBlockK = 256;
constexpr std::size_t kBlockN = 256;

// 4 rows x 8 columns of C, accumulating over p in [p0, p1).
inline void tile_4x8(const double* a, const double* b, double* c, std::size_t n,
                     std::size_t k, std::size_t p0, std::size_t p1) {
  __m256d c00 = _mm256_loadu_pd(c), c01 = _mm256_loadu_pd(c + 4);
  __m256d c10 = _mm256_loadu_pd(c + n), c11 = _mm256_loadu_pd(c + n + 4);
  __m256d c20 = _mm256_loadu_pd(c + 2 * n), c21 = _mm256_loadu_pd(c + 2 * n + 4);
  __m256d c30 = _mm256_loadu_pd(c + 3 * n), c31 = _mm256_loadu_pd(c + 3 * n + 4);
  for (std::size_t p = p0; p < p1; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * n);
    const __m256d b1 = _mm256_loadu_pd(b + p * n + 4);
    __m256d av = _mm256_broadcast_sd(a + p);
    c00 = _mm256_fmadd_pd(av, b0, c00);
    c01 = _mm256_fmadd_pd(av, b1, c01);
    av = _mm256_broadcast_sd(a + k + p);
    c10 = _mm256_fmadd_pd(av, b0, c10);
    c11 = _mm256_fmadd_pd(av, b1, c11);
    av = _mm256_broadcast_sd(a + 2 * k + p);
    c20 = _mm256_fmadd_pd(av, b0, c20);
    c21 = _mm256_fmadd_pd(av, b1, c21);
    av = _mm256_broadcast_sd(a + 3 * k + p);
    c30 = _mm256_fmadd_pd(av, b0, c30);
    c31 = _mm256_fmadd_pd(av, b1, c31);
  }
  _mm256_storeu_pd(c, c00);
  _mm256_storeu_pd(c + 4, c01);
  _mm256_storeu_pd(c + n, c10);
  _mm256_storeu_pd(c + n + 4, c11);
  _mm256_storeu_pd(c + 2 * n, c20);
  _mm256_storeu_pd(c + 2 * n + 4, c21);
  _mm256_storeu_pd(c + 3 * n, c30);
  _mm256_storeu_pd(c + 3 * n + 4, c31);
}

// One row of C over columns [j0, j1).
inline void row_strip(const double* a, const double* b, double* c, std::size_t n,
                      std::size_t j0, std::size_t j1, std::size_t p0,
                      std::size_t p1) {
  std::size_t j = j0;
  for (; j + 4 <= j1; j += 4) {
    __m256d acc = _mm256_loadu_pd(c + j);
    for (std::size_t p = p0; p < p1; ++p)
      acc = _mm256_fmadd_pd(_mm256_broadcast_sd(a + p), _mm256_loadu_pd(b + p * n + j), acc);
    _mm256_storeu_pd(c + j, acc);
  }
  for (; j < j1; ++j) {
    double acc = c[j];
    for (std::size_t p = p0; p < p1; ++p) acc = std::fma(a[p], b[p * n + j], acc);
    c[j] = acc;
  }
}

}  // namespace

void gemm(const double* a, const double* b, double* c, std::size_t m,
          std::size_t n, std::size_t k) {
  std::fill(c, c + m * n, 0.0);
  for (std::size_t p0 = 0; p0 < k; p0 += kBlockK) {
    const std::size_t p1 = std::min(k, p0 + kBlockK);
    for (std::size_t j0 = 0; j0 < n; j0 += kBlockN) {
      const std::size_t j1 = std::min(n, j0 + kBlockN);
      const std::size_t j8 = j0 + (j1 - j0) / 8 * 8;
      std::size_t i = 0;
      for (; i + 4 <= m; i += 4) {
        for (std::size_t j = j0; j < j8; j += 8)
          tile_4x8(a + i * k, b + j, c + i * n + j, n, k, p0, p1);
        if (j8 < j1)
          for (std::size_t r = 0; r < 4; ++r)
            row_strip(a + (i + r) * k, b, c + (i + r) * n, n, j8, j1, p0, p1);
      }
      for (; i < m; ++i) row_strip(a + i * k, b, c + i * n, n, j0, j1, p0, p1);
    }
  }
}

namespace {
inline double finish(__m256d acc, double* s, const double* x, const double* y,
                     std::size_t p, std::size_t n) {
  _mm256_storeu_pd(s, acc);
  for (; p < n; ++p) s[p & 3] = std::fma(x[p], y[p], s[p & 3]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}
}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + p), _mm256_loadu_pd(y + p), acc);
  double s[4];
  return finish(acc, s, x, y, p, n);
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    const __m256d v = _mm256_loadu_pd(x + p);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s[4];
  return finish(acc, s, x, x, p, n);
}

}  // namespace tnrg::kernels::avx2
