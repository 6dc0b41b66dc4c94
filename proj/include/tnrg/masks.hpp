#pragma once
// Per-leg index patterns. NonZero means index >= 1; NonZero legs are
// independent of each other.

#include <initializer_list>
#include <span>
#include <vector>

#include "tnrg/tensor.hpp"

namespace tnrg {

enum class Pattern { zero, nonzero, any };

using IndexMask = std::vector<Pattern>;

inline constexpr Pattern Z = Pattern::zero;
inline constexpr Pattern NZ = Pattern::nonzero;
inline constexpr Pattern ANY = Pattern::any;

bool matches(const IndexMask& mask, std::span<const std::size_t> index);

/// Copy of t with every entry not matched by any of the masks set to 0.
Tensor masked(const Tensor& t, std::span<const IndexMask> masks);
Tensor masked(const Tensor& t, const IndexMask& mask);

/// HS norm of masked(t, masks). An entry matched by several masks counts once.
double pattern_norm(const Tensor& t, std::span<const IndexMask> masks);
double pattern_norm(const Tensor& t, const IndexMask& mask);

/// Standard four-leg mask families.
namespace masks {
/// Exactly one NonZero leg: (NZ,0,0,0) and rotations.
std::vector<IndexMask> single_leg();
/// Exactly two adjacent NonZero legs: (NZ,NZ,0,0) and rotations.
std::vector<IndexMask> corners();
}  // namespace masks

}  // namespace tnrg
