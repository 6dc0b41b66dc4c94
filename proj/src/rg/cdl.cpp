#include <random>

#include "tnrg/errors.hpp"
#include "tnrg/rg_truncated.hpp"

namespace tnrg {

Tensor cdl(const CdlSpec& spec) {
  const Eigen::Index k = spec.m1.rows();
  for (const Matrix* m : {&spec.m1, &spec.m2, &spec.m3, &spec.m4})
    if (m->rows() != k || m->cols() != k || k < 1)
      throw Error(ErrorCategory::invalid_input, "cdl: corner matrices must all be k x k, k >= 1");
  if (!spec.m1.allFinite() || !spec.m2.allFinite() || !spec.m3.allFinite() || !spec.m4.allFinite())
    throw Error(ErrorCategory::invalid_input, "cdl: corner matrices must be finite");
  const auto d = static_cast<std::size_t>(k * k);
  Tensor a = lattice_tensor(d, d, d, d);
  auto data = a.data();
  std::size_t off = 0;
  for (Eigen::Index i1 = 0; i1 < k; ++i1)
    for (Eigen::Index i2 = 0; i2 < k; ++i2)
      for (Eigen::Index j1 = 0; j1 < k; ++j1)
        for (Eigen::Index j2 = 0; j2 < k; ++j2)
          for (Eigen::Index k1 = 0; k1 < k; ++k1)
            for (Eigen::Index k2 = 0; k2 < k; ++k2)
              for (Eigen::Index l1 = 0; l1 < k; ++l1)
                for (Eigen::Index l2 = 0; l2 < k; ++l2)
                  data[off++] = spec.m1(i1, j2) * spec.m2(j1, k1) * spec.m3(k2, l1) * spec.m4(l2, i2);
  return a;
}

CdlSpec random_cdl_spec(std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCategory::invalid_input, "random_cdl_spec: k must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const auto n = static_cast<Eigen::Index>(k);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  m(0, 0) = 1.0;
  return {m, m, m, m};
}

}  // namespace tnrg
