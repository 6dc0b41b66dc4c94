#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/rg_exact.hpp"

namespace tnrg {
namespace {

// t viewed as [outer, pair, inner]; applies m to the pair index using only
// the nonzero block of m - 1.
void apply_pair_op(Tensor& t, std::size_t outer, std::size_t pair, std::size_t inner, const Matrix& m,
                   Side side) {
  const Matrix e = m - Matrix::Identity(m.rows(), m.cols());
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    if (e.row(i).cwiseAbs().maxCoeff() != 0.0) rows.push_back(i);
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    if (e.col(j).cwiseAbs().maxCoeff() != 0.0) cols.push_back(j);
  if (rows.empty()) return;
  // post: new[a'] = t[a'] + sum_a t[a] e(a, a'); pre: new[a'] = t[a'] + sum_a e(a', a) t[a]
  const auto& src_idx = side == Side::post ? rows : cols;
  const auto& dst_idx = side == Side::post ? cols : rows;
  auto data = t.data();
  std::vector<double> src(src_idx.size() * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    double* block = data.data() + o * pair * inner;
    for (std::size_t s = 0; s < src_idx.size(); ++s)
      std::copy_n(block + static_cast<std::size_t>(src_idx[s]) * inner, inner, src.begin() + s * inner);
    for (const auto dst : dst_idx) {
      double* out = block + static_cast<std::size_t>(dst) * inner;
      for (std::size_t s = 0; s < src_idx.size(); ++s) {
        const double c = side == Side::post ? e(src_idx[s], dst) : e(dst, src_idx[s]);
        if (c == 0.0) continue;
        const double* in = src.data() + s * inner;
        for (std::size_t i = 0; i < inner; ++i) out[i] += c * in[i];
      }
    }
  }
}

}  // namespace

SplitResult split_S(const Decomposition& dec, const Disentangler& dis, const Tensor& t,
                    std::optional<std::size_t> dmax) {
  const Tensor a = dec.reconstruct();
  const std::size_t dh = a.dim(kRight), dv = a.dim(kTop);
  const std::size_t pair = dh * dh;
  SplitResult out;

  // S = R^{-1} T R: R on the right pair, R^{-1} on the left pair.
  out.s = t;
  apply_pair_op(out.s, 1, pair, t.size() / pair, dis.r_mat, Side::post);
  apply_pair_op(out.s, pair * dv * dv, pair, dv * dv, dis.r_inv, Side::pre);

  const auto [hu, hd] = channel0_halves(a);
  // Delta S as a matrix: rows (t1, t2, l1, r1), columns (b1, b2, l2, r2).
  const std::size_t nrows = dv * dv * dh * dh;
  const std::size_t ncols = nrows;
  check_elements(nrows * ncols, "split matrix");
  Matrix delta(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  {
    std::size_t off = 0;
    const auto s = out.s.data();
    const auto u = hu.data();
    const auto d = hd.data();
    for (std::size_t r1 = 0; r1 < dh; ++r1)
      for (std::size_t r2 = 0; r2 < dh; ++r2)
        for (std::size_t t1 = 0; t1 < dv; ++t1)
          for (std::size_t t2 = 0; t2 < dv; ++t2)
            for (std::size_t l1 = 0; l1 < dh; ++l1) {
              const std::size_t row = ((t1 * dv + t2) * dh + l1) * dh + r1;
              const double hu_v = u[((r1 * dv + t1) * dv + t2) * dh + l1];
              for (std::size_t l2 = 0; l2 < dh; ++l2)
                for (std::size_t b1 = 0; b1 < dv; ++b1)
                  for (std::size_t b2 = 0; b2 < dv; ++b2) {
                    const std::size_t col = ((b1 * dv + b2) * dh + l2) * dh + r2;
                    const double hd_v = d[((r2 * dh + l2) * dv + b1) * dv + b2];
                    delta(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                        s[off++] - hu_v * hd_v;
                  }
            }
  }
  out.delta_s_norm = delta.norm();
  const double s_norm = hs_norm(out.s);

  // Exactly-zero rows and columns carry nothing; drop them before the SVD.
  std::vector<Eigen::Index> live_rows, live_cols;
  for (Eigen::Index i = 0; i < delta.rows(); ++i)
    if (delta.row(i).cwiseAbs().maxCoeff() != 0.0) live_rows.push_back(i);
  for (Eigen::Index j = 0; j < delta.cols(); ++j)
    if (delta.col(j).cwiseAbs().maxCoeff() != 0.0) live_cols.push_back(j);

  Svd f{Matrix(0, 0), Vector(0), Matrix(0, 0)};
  std::size_t full_rank = 0;
  Matrix compact;
  if (!live_rows.empty()) {
    compact.resize(static_cast<Eigen::Index>(live_rows.size()), static_cast<Eigen::Index>(live_cols.size()));
    for (std::size_t i = 0; i < live_rows.size(); ++i)
      for (std::size_t j = 0; j < live_cols.size(); ++j)
        compact(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = delta(live_rows[i], live_cols[j]);
    f = svd(compact);
    const double tol = static_cast<double>(std::max(compact.rows(), compact.cols())) *
                       std::numeric_limits<double>::epsilon() * std::max(f.s[0], s_norm);
    while (full_rank < static_cast<std::size_t>(f.s.size()) && f.s[static_cast<Eigen::Index>(full_rank)] > tol)
      ++full_rank;
  }
  std::size_t keep = full_rank;
  if (dmax) keep = std::min(keep, *dmax > 0 ? *dmax - 1 : 0);
  out.full_rank = full_rank;
  out.rank = keep;
  out.truncated = keep < full_rank;

  const std::size_t chans = 1 + keep;
  out.pair.s_u = Tensor({{"t1", dv}, {"t2", dv}, {"l1", dh}, {"r1", dh}, {"s", chans}});
  out.pair.s_d = Tensor({{"s", chans}, {"b1", dv}, {"b2", dv}, {"l2", dh}, {"r2", dh}});
  auto su = out.pair.s_u.data();
  auto sd = out.pair.s_d.data();
  const Tensor hu_rows = hu.permuted({1, 2, 3, 0});  // (t1, t2, l1, r1)
  const Tensor hd_cols = hd.permuted({2, 3, 1, 0});  // (b1, b2, l2, r2)
  for (std::size_t row = 0; row < nrows; ++row) su[row * chans] = hu_rows.data()[row];
  for (std::size_t col = 0; col < ncols; ++col) sd[col] = hd_cols.data()[col];
  double nuclear = 0.0;
  for (std::size_t n = 0; n < keep; ++n) {
    const auto k = static_cast<Eigen::Index>(n);
    const double root = std::sqrt(f.s[k]);
    nuclear += f.s[k];
    for (std::size_t i = 0; i < live_rows.size(); ++i)
      su[static_cast<std::size_t>(live_rows[i]) * chans + 1 + n] = f.u(static_cast<Eigen::Index>(i), k) * root;
    for (std::size_t j = 0; j < live_cols.size(); ++j)
      sd[(1 + n) * ncols + static_cast<std::size_t>(live_cols[j])] = f.v(static_cast<Eigen::Index>(j), k) * root;
  }
  out.nuclear_norm = nuclear;
  {
    double nu = 0.0, nd = 0.0;
    for (std::size_t row = 0; row < nrows; ++row)
      for (std::size_t n = 1; n < chans; ++n) nu += su[row * chans + n] * su[row * chans + n];
    for (std::size_t x = ncols; x < sd.size(); ++x) nd += sd[x] * sd[x];
    out.half_norm_u = std::sqrt(nu);
    out.half_norm_d = std::sqrt(nd);
  }

  if (!out.truncated && keep > 0) {
    const Eigen::Index k = static_cast<Eigen::Index>(keep);
    const Matrix us = f.u.leftCols(k) * f.s.head(k).asDiagonal();
    const double err = (compact - us * f.v.leftCols(k).transpose()).norm();
    if (err > 1e-10 * std::max(s_norm, std::numeric_limits<double>::min()))
      throw Error(ErrorCategory::internal, "split does not reconstruct S (error " + std::to_string(err) + ")");
  }
  if (nuclear > static_cast<double>(keep) * out.delta_s_norm * (1.0 + 1e-9) + 1e-300)
    throw Error(ErrorCategory::internal, "split violates the nuclear-norm bound");
  return out;
}

Tensor regroup_U(const SplitPair& sp, const PairPacker& p_h) {
  // S_d of the upper cell on S_u of the lower cell, joined over the vertical
  // pair: (s_top, l2, r2, l1, r1, s_bottom).
  Tensor u = contract(sp.s_d, sp.s_u, {{1, 0}, {2, 1}});
  u = u.permuted({2, 4, 0, 1, 3, 5});
  u = fuse_pair(u, 0, 1, p_h, "right");
  u = fuse_pair(u, 2, 3, p_h, "left");
  return u.relabeled({"right", "top", "left", "bottom"});
}

Type2Result type2(const Decomposition& dec, const PairPacker& p_h, std::optional<std::size_t> dmax) {
  const Tensor a = dec.reconstruct();
  if (p_h.d1() != a.dim(kRight) || p_h.d2() != a.dim(kRight))
    throw Error(ErrorCategory::invalid_input, "type2: packer dims do not match the tensor");
  const Tensor t = block_T(a);
  Type2Result out;
  out.dis = build_disentangler(dec, t);
  out.split = split_S(dec, out.dis.dis, t, dmax);
  auto [un, n] = normalize(regroup_U(out.split.pair, p_h));
  out.tensor = std::move(un);
  out.n = n;
  return out;
}

}  // namespace tnrg
