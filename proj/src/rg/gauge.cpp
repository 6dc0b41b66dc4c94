#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/rg_exact.hpp"

namespace tnrg {
namespace {

// B = |l><0| - |0><r| with l_x = a[0,0,x,0], r_x = a[x,0,0,0] for the
// horizontal direction, or l_x = a[0,0,0,x], r_x = a[0,x,0,0] vertically.
Matrix generator(const Tensor& a, bool horizontal) {
  const std::size_t d = a.dim(horizontal ? kRight : kTop);
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t x = 1; x < d; ++x) {
    const double l = horizontal ? a({0, 0, x, 0}) : a({0, 0, 0, x});
    const double r = horizontal ? a({x, 0, 0, 0}) : a({0, x, 0, 0});
    b(static_cast<Eigen::Index>(x), 0) = l;
    b(0, static_cast<Eigen::Index>(x)) = -r;
  }
  return b;
}

}  // namespace

GaugeResult gauge_fix(const Tensor& a) {
  if (a.rank() != 4 || a.dim(kRight) != a.dim(kLeft) || a.dim(kTop) != a.dim(kBottom))
    throw Error(ErrorCategory::invalid_input, "gauge_fix: need a four-leg tensor with square bonds");
  GaugeResult out;

  const Matrix bh = generator(a, true);
  out.gauge.g_h = matrix_exp(bh);
  out.gauge.g_h_inv = matrix_exp(-bh);
  Tensor h = apply_leg_op(a, kRight, out.gauge.g_h, Side::post);
  h = apply_leg_op(h, kLeft, out.gauge.g_h_inv, Side::pre);
  auto [hn, nh] = normalize(h);

  const Matrix bv = generator(hn, false);
  out.gauge.g_v = matrix_exp(bv);
  out.gauge.g_v_inv = matrix_exp(-bv);
  Tensor v = apply_leg_op(hn, kTop, out.gauge.g_v, Side::post);
  v = apply_leg_op(v, kBottom, out.gauge.g_v_inv, Side::pre);
  auto [vn, nv] = normalize(v);

  out.tensor = std::move(vn);
  out.n = nh * nv;
  return out;
}

}  // namespace tnrg
