#include <algorithm>
#include <cmath>

#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/rg_truncated.hpp"

namespace tnrg {
namespace {

// Singular values at or below this fraction of the largest are dropped.
constexpr double kRankTol = 1e-14;

struct Halves {
  Tensor left;   // (row legs..., m)
  Tensor right;  // (m, col legs...)
  double discarded = 0.0;
};

// Splits a 4-leg tensor whose first two legs index rows.
Halves split_rows(const Tensor& t, std::size_t d_max) {
  const Matrix m = unfold(t, 2);
  const Svd f = svd(m);
  std::size_t keep = 0;
  const double top = f.s.size() > 0 ? f.s[0] : 0.0;
  while (keep < static_cast<std::size_t>(f.s.size()) && f.s[static_cast<Eigen::Index>(keep)] > kRankTol * top)
    ++keep;
  const std::size_t rank = keep;
  keep = std::max<std::size_t>(1, std::min(keep, d_max));
  Halves h;
  if (rank > keep) h.discarded = f.s[static_cast<Eigen::Index>(keep)] / top;
  const auto k = static_cast<Eigen::Index>(keep);
  const Vector root = f.s.head(k).cwiseSqrt();
  const Matrix u = f.u.leftCols(k) * root.asDiagonal();
  const Matrix v = root.asDiagonal() * f.v.leftCols(k).transpose();
  h.left = fold(u, {t.legs()[0], t.legs()[1], {"m", keep}});
  h.right = fold(v, {{"m", keep}, t.legs()[2], t.legs()[3]});
  return h;
}

}  // namespace

TruncatedStep trg_step(const Tensor& a, std::size_t d_max) {
  if (a.rank() != 4 || a.dim(kRight) != a.dim(kLeft) || a.dim(kTop) != a.dim(kBottom) ||
      a.dim(kRight) != a.dim(kTop))
    throw Error(ErrorCategory::invalid_input, "trg_step: need a four-leg tensor with equal dims");
  if (d_max == 0) throw Error(ErrorCategory::configuration, "trg_step: d_max must be >= 1");
  // alpha: (r, t | l, b) -> S1[r,t,m], S2[m,l,b]
  const Halves alpha = split_rows(a, d_max);
  // beta: (t, l | b, r) -> S3[t,l,m], S4[m,b,r]
  const Halves beta = split_rows(a.permuted({kTop, kLeft, kBottom, kRight}), d_max);

  // Plaquette with corners P (bottom-left), Q (bottom-right), R (top-right),
  // W (top-left); bonds a = P.r-Q.l, b = Q.t-R.b, c = R.l-W.r, d = W.b-P.t.
  // X[a, m1, m4, c] = S1_P[a, d, m1] S4_W[m4, d, c]
  const Tensor x = contract(alpha.left, beta.right, {{1, 1}});
  // Y[a, m2, m3, c] = S3_Q[b, a, m2] S2_R[m3, c, b]
  const Tensor y = contract(beta.left, alpha.right, {{0, 2}});
  Tensor next = contract(x, y, {{0, 0}, {3, 3}});  // (m1, m4, m2, m3)
  next = next.permuted({3, 1, 0, 2}).relabeled({"right", "top", "left", "bottom"});
  auto [an, n] = normalize(next);
  return {std::move(an), n, std::max(alpha.discarded, beta.discarded)};
}

}  // namespace tnrg
