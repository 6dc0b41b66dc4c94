#pragma once
// Two-dimensional Ising model (coupling 1, no field) as a tensor network.

#include <cstddef>

#include "tnrg/linalg.hpp"
#include "tnrg/tensor.hpp"

namespace tnrg {

/// Tensor on the 45-degree rotated lattice: one tensor per plaquette, with the
/// four spins of the plaquette encoded in the bond variables.
Tensor ising_rotated(double beta);

/// Tensor with one copy per spin, from the factorization W = M M^T of the
/// bond weight W(s, s') = exp(beta s s').
Tensor ising_unrotated(double beta);

/// Rows indexed by the spin (+1, -1), columns by the bond index (0, 1).
Matrix ising_bond_factor(double beta);

/// Partition function of the Lx x Ly periodic square lattice by direct
/// enumeration of all 2^(Lx*Ly) spin states. Each site couples to its right
/// and upper neighbour, so for L <= 2 some pairs are counted twice, as in the
/// tensor network. Refuses more than 24 spins.
double ising_partition_enumerated(double beta, std::size_t lx, std::size_t ly);

inline double ising_beta_critical() { return 0.44068679350977151262; }

/// Infinite-volume log Z per spin from the exact double integral, with the
/// inner angular integral in closed form and adaptive Gauss-Kronrod for the
/// outer one. Throws numerical when the estimated error exceeds 1e-11
/// (absolute); the message carries the achieved tolerance.
double exact_free_energy_reference(double beta);

struct FreeEnergyQuadrature {
  double value;
  double error_estimate;
};
FreeEnergyQuadrature exact_free_energy_quadrature(double beta);

}  // namespace tnrg
