#pragma once

#include <cstddef>

#include "tnrg/tensor.hpp"

namespace tnrg::detail {

/// Visits every entry of an 8-leg block (r1, r2, t1, t2, l1, l2, b1, b2) with
/// its offset and the value of H_u[r1,t1,t2,l1] * H_d[r2,l2,b1,b2].
template <class Fn>
void for_each_channel0(const Tensor& t, const Tensor& hu, const Tensor& hd, Fn&& fn) {
  const std::size_t dh = t.dim(0), dv = t.dim(2);
  const auto u = hu.data();
  const auto d = hd.data();
  std::size_t off = 0;
  for (std::size_t r1 = 0; r1 < dh; ++r1)
    for (std::size_t r2 = 0; r2 < dh; ++r2)
      for (std::size_t t1 = 0; t1 < dv; ++t1)
        for (std::size_t t2 = 0; t2 < dv; ++t2)
          for (std::size_t l1 = 0; l1 < dh; ++l1) {
            const double hu_v = u[((r1 * dv + t1) * dv + t2) * dh + l1];
            for (std::size_t l2 = 0; l2 < dh; ++l2) {
              const double* hd_row = d.data() + (r2 * dh + l2) * dv * dv;
              for (std::size_t b = 0; b < dv * dv; ++b) fn(off++, hu_v * hd_row[b]);
            }
          }
}

}  // namespace tnrg::detail
