#include "tnrg/pair_packer.hpp"

#include <algorithm>

#include "tnrg/errors.hpp"

namespace tnrg {

PairPacker::PairPacker(std::size_t d1, std::size_t d2, std::vector<std::size_t> table)
    : d1_(d1), d2_(d2), table_(std::move(table)) {
  if (d1 == 0 || d2 == 0) throw Error(ErrorCategory::invalid_input, "packer dims must be positive");
  if (table_.size() != d1 * d2)
    throw Error(ErrorCategory::invalid_input, "packer table has the wrong size");
  inverse_.assign(table_.size(), table_.size());
  for (std::size_t q = 0; q < table_.size(); ++q) {
    const std::size_t f = table_[q];
    if (f >= table_.size() || inverse_[f] != table_.size())
      throw Error(ErrorCategory::invalid_input, "packer table is not a bijection");
    inverse_[f] = q;
  }
  if (table_[0] != 0) throw Error(ErrorCategory::invalid_input, "packer must map (0,0) to 0");
}

PairPacker PairPacker::diagonal(std::size_t d1, std::size_t d2) {
  std::vector<std::size_t> table(d1 * d2);
  std::size_t next = 0;
  for (std::size_t s = 0; s + 1 < d1 + d2; ++s)
    for (std::size_t a = 0; a < d1; ++a)
      if (s >= a && s - a < d2) table[a * d2 + (s - a)] = next++;
  return PairPacker(d1, d2, std::move(table));
}

PairPacker PairPacker::row_major(std::size_t d1, std::size_t d2) {
  std::vector<std::size_t> table(d1 * d2);
  for (std::size_t q = 0; q < table.size(); ++q) table[q] = q;
  return PairPacker(d1, d2, std::move(table));
}

PairPacker PairPacker::from_table(std::size_t d1, std::size_t d2, std::vector<std::size_t> table) {
  return PairPacker(d1, d2, std::move(table));
}

std::pair<std::size_t, std::size_t> PairPacker::split(std::size_t fused) const {
  const std::size_t q = inverse_.at(fused);
  return {q / d2_, q % d2_};
}

namespace {

// Moves legs a and b next to each other (a first) at the position of a.
std::vector<std::size_t> adjacent_order(std::size_t rank, std::size_t leg_a, std::size_t leg_b) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rank; ++i) {
    if (i == leg_b) continue;
    order.push_back(i);
    if (i == leg_a) order.push_back(leg_b);
  }
  return order;
}

}  // namespace

Tensor fuse_pair(const Tensor& t, std::size_t leg_a, std::size_t leg_b, const PairPacker& p,
                 std::string label) {
  if (leg_a >= t.rank() || leg_b >= t.rank() || leg_a == leg_b)
    throw Error(ErrorCategory::invalid_input, "fuse_pair: invalid legs");
  if (t.dim(leg_a) != p.d1() || t.dim(leg_b) != p.d2())
    throw Error(ErrorCategory::invalid_input, "fuse_pair: packer dims do not match the legs");
  const auto order = adjacent_order(t.rank(), leg_a, leg_b);
  const Tensor moved = t.permuted(order);

  std::vector<Leg> legs;
  std::size_t outer_size = 1, inner_size = 1;
  bool after = false;
  for (std::size_t n = 0; n < order.size(); ++n) {
    if (order[n] == leg_b) continue;
    if (order[n] == leg_a) {
      legs.push_back({label.empty() ? t.label(leg_a) + "*" + t.label(leg_b) : label, p.size()});
      after = true;
      continue;
    }
    legs.push_back(t.legs()[order[n]]);
    (after ? inner_size : outer_size) *= t.dim(order[n]);
  }
  Tensor out(std::move(legs));
  auto src = moved.data();
  auto dst = out.data();
  const std::size_t pair = p.size();
  for (std::size_t o = 0; o < outer_size; ++o)
    for (std::size_t q = 0; q < pair; ++q) {
      const double* s = src.data() + (o * pair + q) * inner_size;
      std::copy(s, s + inner_size, dst.data() + (o * pair + p.table()[q]) * inner_size);
    }
  return out;
}

Tensor unfuse_pair(const Tensor& t, std::size_t leg, const PairPacker& p, std::string label_a,
                   std::string label_b) {
  if (leg >= t.rank()) throw Error(ErrorCategory::invalid_input, "unfuse_pair: leg out of range");
  if (t.dim(leg) != p.size())
    throw Error(ErrorCategory::invalid_input, "unfuse_pair: packer size does not match the leg");
  std::vector<Leg> legs;
  std::size_t outer_size = 1, inner_size = 1;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (i == leg) {
      legs.push_back({std::move(label_a), p.d1()});
      legs.push_back({std::move(label_b), p.d2()});
      continue;
    }
    legs.push_back(t.legs()[i]);
    (i < leg ? outer_size : inner_size) *= t.dim(i);
  }
  Tensor out(std::move(legs));
  auto src = t.data();
  auto dst = out.data();
  const std::size_t pair = p.size();
  for (std::size_t o = 0; o < outer_size; ++o)
    for (std::size_t q = 0; q < pair; ++q) {
      const double* s = src.data() + (o * pair + p.table()[q]) * inner_size;
      std::copy(s, s + inner_size, dst.data() + (o * pair + q) * inner_size);
    }
  return out;
}

}  // namespace tnrg
