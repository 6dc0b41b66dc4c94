#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/ising.hpp"
#include "tnrg/masks.hpp"
#include "tnrg/torus.hpp"

using namespace tnrg;

TEST_CASE("ising: bond factor reproduces the Boltzmann weight") {
  for (double beta : {0.0, 0.3, 1.2}) {
    const Matrix m = ising_bond_factor(beta);
    const Matrix w = m * m.transpose();
    CHECK(w(0, 0) == doctest::Approx(std::exp(beta)));
    CHECK(w(0, 1) == doctest::Approx(std::exp(-beta)));
    CHECK(w(1, 1) == doctest::Approx(std::exp(beta)));
  }
}

TEST_CASE("ising: unrotated torus equals spin enumeration") {
  for (double beta : {0.1, 0.44, 0.9})
    for (auto [lx, ly] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 3}, {4, 4}, {2, 3}}) {
      const double ref = oracle::ising_spin_sum(beta, lx, ly);
      CHECK(torus_contract(ising_unrotated(beta), lx, ly) == doctest::Approx(ref).epsilon(1e-12));
      CHECK(ising_partition_enumerated(beta, lx, ly) == doctest::Approx(ref).epsilon(1e-12));
    }
  CHECK_THROWS_AS(ising_partition_enumerated(0.1, 5, 5), Error);
}

TEST_CASE("ising: parity kills odd entries") {
  const Tensor a = ising_unrotated(0.7);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          if ((i + j + k + l) % 2) CHECK(a({i, j, k, l}) == 0.0);
  CHECK(pattern_norm(a, masks::single_leg()) == 0.0);
}

TEST_CASE("ising: rotated tensor smoke") {
  const Tensor a = ising_rotated(0.4);
  CHECK(a.dims() == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(a({0, 0, 0, 0}) > 0.0);
  CHECK(torus_contract(a, 2, 2) > 0.0);
  // Invariant under the global spin flip, i.e. under 90-degree rotation of legs.
  CHECK(hs_distance(a, a.permuted({1, 2, 3, 0})) < 1e-12 * hs_norm(a));
}

TEST_CASE("free energy: quadrature against trapezoid oracle") {
  CHECK(exact_free_energy_reference(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  for (double beta : {0.1, 0.3, 0.6, 1.0}) {
    const double f = exact_free_energy_reference(beta);
    CHECK(std::abs(f - oracle::onsager_trapezoid(beta)) < 1e-10);
    CHECK(exact_free_energy_quadrature(beta).error_estimate < 1e-11);
  }
  // Near criticality the trapezoid rule converges slowly; only a loose check.
  const double bc = ising_beta_critical();
  CHECK(std::abs(exact_free_energy_reference(bc) - oracle::onsager_trapezoid(bc, 1200)) < 1e-5);
  // High-temperature series: log(2 cosh^2 b) + O(b^4) corrections.
  const double b = 1e-3;
  CHECK(std::abs(exact_free_energy_reference(b) - std::log(2 * std::pow(std::cosh(b), 2))) < 1e-10);
}
