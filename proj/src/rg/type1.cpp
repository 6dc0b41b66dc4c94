#include "tnrg/contract.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/masks.hpp"
#include "tnrg/rg_exact.hpp"

namespace tnrg {

Tensor block_T(const Tensor& a) {
  if (a.rank() != 4 || a.dim(kRight) != a.dim(kLeft) || a.dim(kTop) != a.dim(kBottom))
    throw Error(ErrorCategory::invalid_input, "block_T: opposite legs must have equal dims");
  // Upper row: (ul.t, ul.l, ul.b, ur.r, ur.t, ur.b); lower row likewise.
  const Tensor row = contract(a, a, {{kRight, kLeft}}).permuted({0, 1, 2, 3, 4, 5});
  // Join ul.b-dl.t and ur.b-dr.t:
  // (ul.t, ul.l, ur.r, ur.t, dl.l, dl.b, dr.r, dr.b)
  Tensor t = contract(row, row, {{2, 0}, {5, 4}});
  t = t.permuted({2, 6, 0, 3, 1, 4, 5, 7});
  return t.relabeled({"r1", "r2", "t1", "t2", "l1", "l2", "b1", "b2"});
}

Tensor fuse_block(const Tensor& t, const PairPacker& p_h, const PairPacker& p_v) {
  if (t.rank() != 8) throw Error(ErrorCategory::invalid_input, "fuse_block: need an 8-leg tensor");
  Tensor f = fuse_pair(t, 0, 1, p_h, "right");
  f = fuse_pair(f, 1, 2, p_v, "top");
  f = fuse_pair(f, 2, 3, p_h, "left");
  return fuse_pair(f, 3, 4, p_v, "bottom");
}

Tensor Decomposition::reconstruct() const { return fixed_part + one_circle + two_circle; }

Decomposition decompose(const Tensor& normalized, double n) {
  Decomposition dec;
  dec.fixed_part = fixed_point(normalized.dims());
  Tensor dev = normalized - dec.fixed_part;
  const auto corners = masks::corners();
  dec.one_circle = masked(dev, corners);
  dec.two_circle = dev - dec.one_circle;
  dec.n = n;
  return dec;
}

Type1Result type1(const Tensor& a, const PairPacker& p_h, const PairPacker& p_v) {
  if (a.dim(kRight) != p_h.d1() || a.dim(kRight) != p_h.d2() || a.dim(kTop) != p_v.d1() ||
      a.dim(kTop) != p_v.d2())
    throw Error(ErrorCategory::invalid_input, "type1: packer dims do not match the tensor");
  auto [an, n] = normalize(fuse_block(block_T(a), p_h, p_v));
  Type1Result out;
  out.dec = decompose(an, n);
  out.tensor = std::move(an);
  out.n = n;
  return out;
}

}  // namespace tnrg
