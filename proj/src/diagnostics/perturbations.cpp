#include <cmath>
#include <random>

#include "tnrg/diagnostics.hpp"
#include "tnrg/errors.hpp"

namespace tnrg {

std::vector<std::array<std::size_t, 8>> eig1_block_components() {
  // Pairs written (first, second) per the pair convention.
  return {
      {1, 0, 0, 2, 0, 0, 0, 0},
      {0, 2, 0, 0, 0, 0, 0, 2},
      {0, 0, 0, 0, 0, 2, 1, 0},
      {0, 0, 1, 0, 1, 0, 0, 0},
  };
}

std::array<std::size_t, 4> eig1_site_index(const std::array<std::size_t, 8>& c) {
  // Outer legs of the block: r1 = ur.r, r2 = dr.r, t1 = ul.t, t2 = ur.t,
  // l1 = ul.l, l2 = dl.l, b1 = dl.b, b2 = dr.b.
  enum Site { ul, ur, dl, dr };
  struct Slot {
    Site site;
    LatticeLeg leg;
  };
  static constexpr Slot kSlots[8] = {{ur, kRight}, {dr, kRight}, {ul, kTop},  {ur, kTop},
                                     {ul, kLeft},  {dl, kLeft},  {dl, kBottom}, {dr, kBottom}};
  std::array<std::array<std::size_t, 4>, 4> idx{};
  std::array<bool, 4> touched{};
  for (std::size_t n = 0; n < 8; ++n)
    if (c[n] != 0) {
      idx[kSlots[n].site][kSlots[n].leg] = c[n];
      touched[kSlots[n].site] = true;
    }
  int count = 0;
  std::size_t which = 0;
  for (std::size_t s = 0; s < 4; ++s)
    if (touched[s]) {
      ++count;
      which = s;
    }
  if (count != 1)
    throw Error(ErrorCategory::invalid_input, "block component is not carried by a single site");
  return idx[which];
}

Tensor eig1_perturbation(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCategory::invalid_input, "eig1_perturbation: eps must be > 0");
  Tensor a = fixed_point_lattice(3, 3);
  for (const auto& c : eig1_block_components()) {
    const auto i = eig1_site_index(c);
    a({i[0], i[1], i[2], i[3]}) = eps;
  }
  return a;
}

PairPacker special_packer_eig1() {
  const PairPacker diag = PairPacker::diagonal(3, 3);
  std::vector<std::size_t> table(9, 9);
  table[0 * 3 + 0] = 0;
  table[1 * 3 + 0] = 1;
  table[0 * 3 + 2] = 2;
  std::size_t next = 3;
  for (std::size_t f = 0; f < 9; ++f) {
    const auto [a, b] = diag.split(f);
    if (table[a * 3 + b] == 9) table[a * 3 + b] = next++;
  }
  return PairPacker::from_table(3, 3, std::move(table));
}

PackerFactory eig1_packer_factory() {
  return [](std::size_t d1, std::size_t d2) {
    return d1 == 3 && d2 == 3 ? special_packer_eig1() : PairPacker::diagonal(d1, d2);
  };
}

namespace {

Tensor flip(const Tensor& a, const std::vector<std::size_t>& p, bool horizontal) {
  if (a.rank() != 4) throw Error(ErrorCategory::invalid_input, "flip: need a four-leg tensor");
  const std::size_t moved = horizontal ? a.dim(kRight) : a.dim(kTop);
  if (p.size() != moved) throw Error(ErrorCategory::invalid_input, "flip: permutation size mismatch");
  Tensor out(a.legs());
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j)
      for (std::size_t k = 0; k < a.dim(2); ++k)
        for (std::size_t l = 0; l < a.dim(3); ++l)
          out({i, j, k, l}) = horizontal ? a({p[i], l, p[k], j}) : a({k, p[j], i, p[l]});
  return out;
}

}  // namespace

Tensor flip_horizontal(const Tensor& a, const std::vector<std::size_t>& p) { return flip(a, p, true); }
Tensor flip_vertical(const Tensor& a, const std::vector<std::size_t>& p) { return flip(a, p, false); }

Tensor random_perturbation(double eps, std::uint64_t seed, std::array<std::size_t, 4> dims) {
  if (!(eps > 0.0)) throw Error(ErrorCategory::invalid_input, "random_perturbation: eps must be > 0");
  Tensor d = lattice_tensor(dims[0], dims[1], dims[2], dims[3]);
  if (d.size() < 2) throw Error(ErrorCategory::invalid_input, "random_perturbation: need more than one entry");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : d.data()) v = normal(rng);
  d.data()[0] = 0.0;
  d *= eps / hs_norm(d);
  d.data()[0] = 1.0;
  return d;
}

}  // namespace tnrg
