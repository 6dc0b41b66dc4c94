#include <cmath>
#include <string>

#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/rg_exact.hpp"
#include "tnrg_internal.hpp"

namespace tnrg {

std::pair<Tensor, Tensor> channel0_halves(const Tensor& a) {
  std::vector<std::vector<std::size_t>> keep(4);
  for (std::size_t leg = 0; leg < 4; ++leg)
    for (std::size_t i = 0; i < a.dim(leg); ++i) keep[leg].push_back(i);

  auto bottom0 = keep;
  bottom0[kBottom] = {0};
  const Tensor a_b0 = select_indices(a, bottom0);
  // (ul.t, ul.l, ul.b=0, ur.r, ur.t, ur.b=0)
  Tensor hu = contract(a_b0, a_b0, {{kRight, kLeft}}).permuted({3, 0, 4, 1, 2, 5});
  hu = std::move(hu).reshaped({{"r1", a.dim(kRight)}, {"t1", a.dim(kTop)}, {"t2", a.dim(kTop)},
                               {"l1", a.dim(kLeft)}});

  auto top0 = keep;
  top0[kTop] = {0};
  const Tensor a_t0 = select_indices(a, top0);
  // (dl.t=0, dl.l, dl.b, dr.r, dr.t=0, dr.b)
  Tensor hd = contract(a_t0, a_t0, {{kRight, kLeft}}).permuted({3, 1, 2, 5, 0, 4});
  hd = std::move(hd).reshaped({{"r2", a.dim(kRight)}, {"l2", a.dim(kLeft)},
                               {"b1", a.dim(kBottom)}, {"b2", a.dim(kBottom)}});
  return {std::move(hu), std::move(hd)};
}

DisentanglerResult build_disentangler(const Decomposition& dec) {
  return build_disentangler(dec, block_T(dec.reconstruct()));
}

DisentanglerResult build_disentangler(const Decomposition& dec, const Tensor& t) {
  const Tensor a = dec.reconstruct();
  const std::size_t dh = a.dim(kRight);
  const std::size_t dv = a.dim(kTop);
  const std::size_t pair = dh * dh;
  if (t.rank() != 8 || t.dim(0) != dh || t.dim(6) != dv)
    throw Error(ErrorCategory::invalid_input, "build_disentangler: block does not match the tensor");

  DisentanglerResult out;
  Disentangler& dis = out.dis;
  dis.d = dh;
  dis.l = Vector::Zero(static_cast<Eigen::Index>(pair));
  dis.r = Vector::Zero(static_cast<Eigen::Index>(pair));
  // Left column carries the nonzero internal vertical bond m; the right
  // column is the fixed point.
  for (std::size_t i = 1; i < dh; ++i)
    for (std::size_t j = 1; j < dh; ++j) {
      double left = 0.0, right = 0.0;
      for (std::size_t m = 1; m < dv; ++m) {
        left += a({0, 0, i, m}) * a({0, m, j, 0});
        right += a({i, 0, 0, m}) * a({j, m, 0, 0});
      }
      dis.l[static_cast<Eigen::Index>(i * dh + j)] = left;
      dis.r[static_cast<Eigen::Index>(i * dh + j)] = right;
    }
  const auto n = static_cast<Eigen::Index>(pair);
  dis.b = Matrix::Zero(n, n);
  dis.b.col(0) += dis.l;
  dis.b.row(0) -= dis.r.transpose();
  dis.r_mat = matrix_exp(dis.b);
  dis.r_inv = matrix_exp(-dis.b);

  out.dangerous = Tensor(t.legs());
  const auto strides = out.dangerous.strides();
  for (std::size_t i = 0; i < dh; ++i)
    for (std::size_t j = 0; j < dh; ++j) {
      const auto q = static_cast<Eigen::Index>(i * dh + j);
      out.dangerous.data()[i * strides[4] + j * strides[5]] += dis.l[q];
      out.dangerous.data()[i * strides[0] + j * strides[1]] += dis.r[q];
    }
  out.dangerous_norm = std::sqrt(dis.l.squaredNorm() + dis.r.squaredNorm());

  // T_nz = T - H_u (x) H_d; the first-order commutator puts -l on the left
  // pair and -r on the right pair of the fixed-point block.
  const auto [hu, hd] = channel0_halves(a);
  double nz = 0.0, res = 0.0;
  detail::for_each_channel0(t, hu, hd, [&](std::size_t off, double ch0) {
    const double v = t.data()[off] - ch0;
    const double w = v - out.dangerous.data()[off];
    nz += v * v;
    res += w * w;
  });
  out.t_nz_norm = std::sqrt(nz);
  out.cancellation_residual = std::sqrt(res);
  if (out.cancellation_residual > out.t_nz_norm * (1.0 + 1e-12))
    throw Error(ErrorCategory::configuration,
                "disentangler does not cancel the dangerous diagrams: residual " +
                    std::to_string(out.cancellation_residual) + " vs " + std::to_string(out.t_nz_norm));
  return out;
}

}  // namespace tnrg
