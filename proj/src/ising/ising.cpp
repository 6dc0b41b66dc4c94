#include "tnrg/ising.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "tnrg/errors.hpp"

namespace tnrg {
namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw Error(ErrorCategory::invalid_input, "beta must be finite and >= 0, got " + std::to_string(beta));
}

}  // namespace

Tensor ising_rotated(double beta) {
  check_beta(beta);
  const double c = std::cosh(4.0 * beta);
  const double s = std::sinh(4.0 * beta);
  Tensor a = lattice_tensor(2, 2, 2, 2);
  a({0, 0, 0, 0}) = c + 3.0;
  a({0, 1, 0, 1}) = c - 1.0;
  a({1, 0, 1, 0}) = c - 1.0;
  a({1, 1, 1, 1}) = c - 1.0;
  // Two adjacent legs carrying 1.
  a({0, 0, 1, 1}) = s;
  a({1, 0, 0, 1}) = s;
  a({1, 1, 0, 0}) = s;
  a({0, 1, 1, 0}) = s;
  return a;
}

Matrix ising_bond_factor(double beta) {
  check_beta(beta);
  const double rc = std::sqrt(std::cosh(beta));
  const double rs = std::sqrt(std::sinh(beta));
  Matrix m(2, 2);
  m << rc, rs, rc, -rs;
  return m;
}

Tensor ising_unrotated(double beta) {
  const Matrix m = ising_bond_factor(beta);
  Tensor a = lattice_tensor(2, 2, 2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
          double v = 0.0;
          for (Eigen::Index s = 0; s < 2; ++s) v += m(s, i) * m(s, j) * m(s, k) * m(s, l);
          a({i, j, k, l}) = v;
        }
  // Entries with an odd number of 1 indices cancel between the two spins;
  // pin them to exact zeros.
  for (std::size_t q = 0; q < 16; ++q)
    if (std::popcount(q) % 2 == 1) a.data()[q] = 0.0;
  return a;
}

double ising_partition_enumerated(double beta, std::size_t lx, std::size_t ly) {
  check_beta(beta);
  const std::size_t n = lx * ly;
  if (lx == 0 || ly == 0 || n > 24)
    throw Error(ErrorCategory::invalid_input, "spin enumeration supports 1..24 spins");
  double z = 0.0;
  for (std::size_t state = 0; state < (std::size_t{1} << n); ++state) {
    auto spin = [&](std::size_t x, std::size_t y) {
      return ((state >> (y * lx + x)) & 1U) ? -1 : 1;
    };
    int bonds = 0;
    for (std::size_t y = 0; y < ly; ++y)
      for (std::size_t x = 0; x < lx; ++x)
        bonds += spin(x, y) * (spin((x + 1) % lx, y) + spin(x, (y + 1) % ly));
    z += std::exp(beta * bonds);
  }
  return z;
}

}  // namespace tnrg
