#include "tnrg/kernels.hpp"

#include <cmath>

namespace tnrg::kernels::scalar {

void gemm(const double* a, const double* b, double* c, std::size_t m,
          std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] = std::fma(aip, bp[j], ci[j]);
    }
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t p = 0; p < n; ++p) s[p & 3] = std::fma(x[p], y[p], s[p & 3]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double sum_squares(const double* x, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t p = 0; p < n; ++p) s[p & 3] = std::fma(x[p], x[p], s[p & 3]);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace tnrg::kernels::scalar
