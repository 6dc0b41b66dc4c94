#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/ising.hpp"
#include "tnrg/rg_exact.hpp"
#include "tnrg/rg_truncated.hpp"
#include "tnrg/torus.hpp"

using namespace tnrg;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::size_t numerical_rank(const Matrix& m) {
  const Svd s = svd(m);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) > 1e-10 * s.s(0)) ++r;
  return r;
}

Matrix random_corner(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  m(0, 0) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("trg/hotrg: untruncated steps preserve small-torus Z") {
  for (double beta : {0.3, 0.7}) {
    const Tensor a = ising_unrotated(beta);
    const double z = torus_contract(a, 4, 4);
    const TruncatedStep s1 = trg_step(a, 100), s2 = trg_step(s1.tensor, 100);
    CHECK(s1.discarded == 0.0);
    CHECK(rel(std::pow(s1.n, 8) * std::pow(s2.n, 4) * torus_contract(s2.tensor, 2, 2), z) < 1e-9);
    const TruncatedStep h = hotrg_step(a, 100);
    CHECK(rel(std::pow(h.n, 4) * torus_contract(h.tensor, 2, 2), z) < 1e-9);
  }
}

TEST_CASE("trg/hotrg: truncation respects d_max") {
  const Tensor a = ising_unrotated(0.5);
  TruncatedStep s = trg_step(trg_step(a, 3).tensor, 3);
  CHECK(s.tensor.dim(0) <= 3);
  CHECK(s.discarded > 0.0);
  TruncatedStep h = hotrg_step(hotrg_step(a, 3).tensor, 3);
  CHECK(h.tensor.dim(0) <= 3);
  CHECK(h.tensor.dim(1) <= 3);
}

TEST_CASE("flow: infinite temperature gives log 2") {
  for (FlowAlgo algo : {FlowAlgo::trg, FlowAlgo::hotrg}) {
    const FlowRecord r = free_energy_flow(ising_unrotated(0.0), algo, 10, 4);
    CHECK(std::abs(r.f - std::log(2.0)) < 1e-10);
    CHECK(r.log_n.size() == 10);
    CHECK(r.f_partial.back() == r.f);
  }
  CHECK(parse_flow_algo("hotrg") == FlowAlgo::hotrg);
  CHECK_THROWS_AS(parse_flow_algo("srg"), Error);
}

TEST_CASE("flow: converges to the exact free energy off criticality") {
  const double ex = exact_free_energy_reference(0.3);
  const FlowRecord t = free_energy_flow(ising_unrotated(0.3), FlowAlgo::trg, 20, 8);
  const FlowRecord h = free_energy_flow(ising_unrotated(0.3), FlowAlgo::hotrg, 12, 8);
  CHECK(std::abs(t.f - ex) < 1e-4);
  CHECK(std::abs(h.f - ex) < 1e-4);
}

TEST_CASE("cdl: entries are corner products") {
  std::mt19937_64 rng(71);
  const std::size_t k = 2;
  const CdlSpec spec{random_corner(rng, k), random_corner(rng, k), random_corner(rng, k),
                     random_corner(rng, k)};
  const Tensor a = cdl(spec);
  CHECK(a.dims() == std::vector<std::size_t>{4, 4, 4, 4});
  for (std::size_t i1 = 0; i1 < k; ++i1)
    for (std::size_t i2 = 0; i2 < k; ++i2)
      for (std::size_t j1 = 0; j1 < k; ++j1)
        for (std::size_t j2 = 0; j2 < k; ++j2)
          for (std::size_t k1 = 0; k1 < k; ++k1)
            for (std::size_t k2 = 0; k2 < k; ++k2)
              for (std::size_t l1 = 0; l1 < k; ++l1)
                for (std::size_t l2 = 0; l2 < k; ++l2)
                  CHECK(a({i1 * k + i2, j1 * k + j2, k1 * k + k2, l1 * k + l2}) ==
                        doctest::Approx(spec.m1(i1, j2) * spec.m2(j1, k1) * spec.m3(k2, l1) *
                                        spec.m4(l2, i2)));
}

TEST_CASE("cdl: plain blocking keeps the corner-line rank structure") {
  std::mt19937_64 rng(73);
  const std::size_t k = 2;
  const Tensor a = cdl({random_corner(rng, k), random_corner(rng, k), random_corner(rng, k),
                        random_corner(rng, k)});
  const Tensor b = fuse_block(block_T(a), PairPacker::diagonal(4, 4), PairPacker::diagonal(4, 4));
  for (const Tensor* t : {&a, &b}) {
    // (right, top | left, bottom) and (top, left | bottom, right) cuts are
    // crossed by two corner lines each.
    CHECK(numerical_rank(unfold(*t, 2)) <= k * k);
    CHECK(numerical_rank(unfold(t->permuted({1, 2, 3, 0}), 2)) <= k * k);
  }
}
