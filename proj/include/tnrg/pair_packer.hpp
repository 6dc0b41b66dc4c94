#pragma once
// Bijections between a pair of legs and one fused leg.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tnrg/tensor.hpp"

namespace tnrg {

class PairPacker {
 public:
  /// Pairs ordered by increasing a + b, then increasing a.
  static PairPacker diagonal(std::size_t d1, std::size_t d2);
  /// fused = a * d2 + b.
  static PairPacker row_major(std::size_t d1, std::size_t d2);
  /// table[a * d2 + b] is the fused index of (a, b). Must be a bijection
  /// onto 0..d1*d2-1 with (0,0) -> 0; otherwise throws invalid_input.
  static PairPacker from_table(std::size_t d1, std::size_t d2, std::vector<std::size_t> table);

  std::size_t d1() const noexcept { return d1_; }
  std::size_t d2() const noexcept { return d2_; }
  std::size_t size() const noexcept { return d1_ * d2_; }
  std::size_t fuse(std::size_t a, std::size_t b) const { return table_.at(a * d2_ + b); }
  std::pair<std::size_t, std::size_t> split(std::size_t fused) const;
  const std::vector<std::size_t>& table() const noexcept { return table_; }

 private:
  PairPacker(std::size_t d1, std::size_t d2, std::vector<std::size_t> table);
  std::size_t d1_ = 1, d2_ = 1;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
};

/// Replaces legs leg_a (first factor) and leg_b (second factor) by one fused
/// leg at the position of leg_a. Entries are moved, never combined, so the
/// result holds exactly the same numbers.
Tensor fuse_pair(const Tensor& t, std::size_t leg_a, std::size_t leg_b, const PairPacker& p,
                 std::string label = {});

/// Inverse of fuse_pair: the fused leg becomes two adjacent legs (a, b).
Tensor unfuse_pair(const Tensor& t, std::size_t leg, const PairPacker& p, std::string label_a = "a",
                   std::string label_b = "b");

}  // namespace tnrg
