#include <algorithm>
#include <cmath>

#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/rg_truncated.hpp"

namespace tnrg {
namespace {

constexpr double kRankTol = 1e-14;

struct Projector {
  Matrix u;  // (d*d) x kept
  double discarded_weight = 0.0;
  double discarded = 0.0;  // largest dropped eigenvalue / largest eigenvalue
};

Projector leading(const Matrix& env, std::size_t d_max) {
  const SymEig e = sym_eig(env);
  const double top = e.values.size() > 0 ? std::max(e.values[0], 0.0) : 0.0;
  std::size_t keep = 0;
  while (keep < static_cast<std::size_t>(e.values.size()) &&
         e.values[static_cast<Eigen::Index>(keep)] > kRankTol * top)
    ++keep;
  const std::size_t rank = keep;
  keep = std::max<std::size_t>(1, std::min(keep, d_max));
  Projector p;
  p.u = e.vectors.leftCols(static_cast<Eigen::Index>(keep));
  for (std::size_t i = keep; i < rank; ++i) p.discarded_weight += e.values[static_cast<Eigen::Index>(i)];
  if (rank > keep && top > 0.0) p.discarded = e.values[static_cast<Eigen::Index>(keep)] / top;
  return p;
}

// Two sites joined along the horizontal direction; the doubled vertical legs
// are projected with a common isometry.
Tensor merge_horizontal(const Tensor& a, std::size_t d_max, double& discarded) {
  const std::size_t dh = a.dim(kRight), dv = a.dim(kTop);
  // (t1, l1, b1, r2, t2, b2) -> (r2, t1, t2, l1, b1, b2)
  Tensor m = contract(a, a, {{kRight, kLeft}}).permuted({3, 0, 4, 1, 2, 5});
  m = std::move(m).reshaped({{"right", dh}, {"top", dv * dv}, {"left", dh}, {"bottom", dv * dv}});

  // Environments of the doubled top and bottom legs, E = M M^T over all other
  // legs, assembled from two-site pieces.
  // top: P[h, t1, h', t1'] = sum_{l,b} A A,  Q[t2, h, t2', h'] = sum_{r,b} A A
  const Tensor pt_half = contract(a, a, {{kLeft, kLeft}, {kBottom, kBottom}});
  const Tensor qt_half = contract(a, a, {{kRight, kRight}, {kBottom, kBottom}});
  const Tensor env_t = contract(pt_half, qt_half, {{0, 1}, {2, 3}}).permuted({0, 2, 1, 3});
  // bottom: P[h, b1, h', b1'] = sum_{t,l} A A,  Q[h, b2, h', b2'] = sum_{r,t} A A
  const Tensor pb_half = contract(a, a, {{kTop, kTop}, {kLeft, kLeft}});
  const Tensor qb_half = contract(a, a, {{kRight, kRight}, {kTop, kTop}});
  const Tensor env_b = contract(pb_half, qb_half, {{0, 0}, {2, 2}}).permuted({0, 2, 1, 3});
  const Projector pt = leading(unfold(env_t, 2), d_max);
  const Projector pb = leading(unfold(env_b, 2), d_max);
  const Projector& p = pt.discarded_weight <= pb.discarded_weight ? pt : pb;
  discarded = std::max(discarded, p.discarded);

  const Tensor u = fold(p.u, {{"pair", dv * dv}, {"kept", static_cast<std::size_t>(p.u.cols())}});
  // (right, top, left, bottom) with the isometry on top and bottom.
  Tensor out = contract(m, u, {{1, 0}});        // (right, left, bottom, top')
  out = contract(out, u, {{2, 0}});             // (right, left, top', bottom')
  return out.permuted({0, 2, 1, 3}).relabeled({"right", "top", "left", "bottom"});
}

}  // namespace

TruncatedStep hotrg_step(const Tensor& a, std::size_t d_max) {
  if (a.rank() != 4 || a.dim(kRight) != a.dim(kLeft) || a.dim(kTop) != a.dim(kBottom))
    throw Error(ErrorCategory::invalid_input, "hotrg_step: opposite legs must have equal dims");
  if (d_max == 0) throw Error(ErrorCategory::configuration, "hotrg_step: d_max must be >= 1");
  double discarded = 0.0;
  const Tensor h = merge_horizontal(a, d_max, discarded);
  // Vertical merge on the transposed lattice, then transpose back.
  const Tensor v = merge_horizontal(h.permuted({kTop, kRight, kBottom, kLeft}), d_max, discarded)
                       .permuted({kTop, kRight, kBottom, kLeft})
                       .relabeled({"right", "top", "left", "bottom"});
  auto [an, n] = normalize(v);
  return {std::move(an), n, discarded};
}

}  // namespace tnrg
