#pragma once

#include <initializer_list>
#include <span>

#include "tnrg/linalg.hpp"
#include "tnrg/tensor.hpp"

namespace tnrg {

/// Leg `a` of the first tensor is summed against leg `b` of the second.
struct LegPair {
  std::size_t a;
  std::size_t b;
};

/// Exact contraction over the paired legs. Result legs are the uncontracted
/// legs of `a` in order, then those of `b`. Reduces to one GEMM after
/// permuting both operands, so each output entry is a single ascending FMA
/// chain over the contracted multi-index (row-major over the pairs as listed).
Tensor contract(const Tensor& a, const Tensor& b, std::span<const LegPair> pairs);
Tensor contract(const Tensor& a, const Tensor& b, std::initializer_list<LegPair> pairs);
Tensor outer(const Tensor& a, const Tensor& b);

/// Sums over index-equal pairs of legs of one tensor.
Tensor trace(const Tensor& t, std::span<const LegPair> pairs);

enum class Side {
  /// result[.., b, ..] = sum_a t[.., a, ..] * m(a, b)
  post,
  /// result[.., b, ..] = sum_a m(b, a) * t[.., a, ..]
  pre,
};

/// Applies a square matrix to one leg; the leg keeps its position and label.
Tensor apply_leg_op(const Tensor& t, std::size_t leg, const Matrix& m, Side side);

}  // namespace tnrg
