#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/contract.hpp"
#include "tnrg/diagnostics.hpp"
#include "tnrg/ising.hpp"
#include "tnrg/masks.hpp"
#include "tnrg/rg_exact.hpp"
#include "tnrg/torus.hpp"

using namespace tnrg;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Tensor normalized_ising(double beta) { return normalize(ising_unrotated(beta)).first; }

}  // namespace

TEST_CASE("block_T: matches four-site einsum") {
  std::mt19937_64 rng(53);
  const Tensor a = oracle::random_lattice(rng, 2, 3);
  // Sites: ul, ur, dl, dr with legs (r, t, l, b).
  // ul.r = ur.l, ul.b = dl.t, ur.b = dr.t, dl.r = dr.l.
  const Tensor upper = oracle::einsum(a, a, {{0, 2}});              // ul(t,l,b) ur(r,t,b)
  const Tensor lower = oracle::einsum(a, a, {{0, 2}});              // dl(t,l,b) dr(r,t,b)
  const Tensor four = oracle::einsum(upper, lower, {{2, 0}, {5, 4}});  // ul.b-dl.t, ur.b-dr.t
  // four legs: ul.t ul.l ur.r ur.t | dl.l dl.b dr.r dr.b
  const Tensor ref = four.permuted({2, 6, 0, 3, 1, 4, 5, 7});
  const Tensor t = block_T(a);
  REQUIRE(t.dims() == ref.dims());
  CHECK(hs_distance(t, ref.reshaped(t.legs())) < 1e-13 * hs_norm(ref));
}

TEST_CASE("decompose: reconstruct and corner content") {
  std::mt19937_64 rng(59);
  const Tensor a = random_perturbation(0.1, 4, {2, 2, 2, 2});
  const Decomposition d = decompose(a);
  CHECK(hs_distance(d.reconstruct(), a) < 1e-15);
  CHECK(hs_distance(masked(d.one_circle, masks::corners()), d.one_circle) == 0.0);
  CHECK(pattern_norm(d.two_circle, masks::corners()) == 0.0);
  CHECK(d.fixed_part({0, 0, 0, 0}) == 1.0);
}

TEST_CASE("gauge_fix: Z preserved, single legs cleared at first order") {
  for (double beta : {0.2, 0.5}) {
    const Tensor a = normalized_ising(beta);
    const GaugeResult g = gauge_fix(a);
    CHECK(rel(std::pow(g.n, 16) * torus_contract(g.tensor, 4, 4), torus_contract(a, 4, 4)) < 1e-12);
    CHECK((g.gauge.g_h * g.gauge.g_h_inv - Matrix::Identity(2, 2)).norm() < 1e-14);
  }
  const Tensor a = random_perturbation(1e-3, 9, {2, 3, 2, 3});
  const GaugeResult g = gauge_fix(a);
  CHECK(rel(std::pow(g.n, 4) * torus_contract(g.tensor, 2, 2), torus_contract(a, 2, 2)) < 1e-12);
  CHECK(pattern_norm(a, masks::single_leg()) > 1e-4);
  CHECK(pattern_norm(g.tensor, masks::single_leg()) < 1e-5);
  CHECK((g.gauge.g_v * g.gauge.g_v_inv - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("type1: Z preserved on random input, packer does not change norms") {
  std::mt19937_64 rng(61);
  Tensor a = oracle::random_lattice(rng, 2, 2, 0.2);
  a({0, 0, 0, 0}) = 1.0;
  const Type1Result r = type1(a, PairPacker::diagonal(2, 2), PairPacker::diagonal(2, 2));
  CHECK(rel(std::pow(r.n, 4) * torus_contract(r.tensor, 2, 2), torus_contract(a, 4, 4)) < 1e-12);
  const Type1Result q = type1(a, PairPacker::row_major(2, 2), PairPacker::diagonal(2, 2));
  CHECK(delta(q.tensor) == doctest::Approx(delta(r.tensor)).epsilon(1e-14));
  CHECK(hs_distance(r.dec.reconstruct(), r.tensor) < 1e-15);
}

TEST_CASE("disentangler: R is invertible and supported on nonzero pairs") {
  const Tensor a = gauge_fix(random_perturbation(0.05, 2, {2, 2, 2, 2})).tensor;
  const Type1Result t1 = type1(a, PairPacker::diagonal(2, 2), PairPacker::diagonal(2, 2));
  const DisentanglerResult d = build_disentangler(t1.dec);
  const std::size_t dd = d.dis.d;
  CHECK((d.dis.r_mat * d.dis.r_inv - Matrix::Identity(dd * dd, dd * dd)).norm() < 1e-13);
  for (std::size_t i = 0; i < dd; ++i) {
    CHECK(d.dis.l(i) == 0.0);
    CHECK(d.dis.r(i) == 0.0);
    CHECK(d.dis.l(i * dd) == 0.0);
    CHECK(d.dis.r(i * dd) == 0.0);
  }
  CHECK(d.cancellation_residual < d.t_nz_norm);
  CHECK(d.dangerous_norm > 0.0);
}

TEST_CASE("split_S: halves rebuild S and the channel 0 part") {
  const Tensor a = gauge_fix(random_perturbation(0.05, 3, {2, 2, 2, 2})).tensor;
  const Type1Result t1 = type1(a, PairPacker::diagonal(2, 2), PairPacker::diagonal(2, 2));
  const Tensor t = block_T(t1.tensor);
  const DisentanglerResult d = build_disentangler(t1.dec, t);
  const SplitResult s = split_S(t1.dec, d.dis, t);
  // s_u (t1,t2,l1,r1,s) x s_d (s,b1,b2,l2,r2) -> reorder to block_T legs.
  const Tensor prod = contract(s.pair.s_u, s.pair.s_d, {{4, 0}});
  const Tensor back = prod.permuted({3, 7, 0, 1, 2, 6, 4, 5});
  CHECK(hs_distance(back.reshaped(s.s.legs()), s.s) < 1e-12 * hs_norm(s.s));
  CHECK(s.nuclear_norm >= 0.0);
  CHECK(s.half_norm_u > 0.0);
  CHECK_FALSE(s.truncated);
  CHECK(s.rank == s.full_rank);
  const auto [hu, hd] = channel0_halves(t1.tensor);
  CHECK(hu.rank() == 4);
  CHECK(hd.rank() == 4);
}

TEST_CASE("type2: Z preserved on ising and random input") {
  for (double beta : {0.2, 0.5}) {
    const Tensor a = normalized_ising(beta);
    const Type1Result t1 = type1(a, PairPacker::diagonal(2, 2), PairPacker::diagonal(2, 2));
    const Type2Result t2 = type2(t1.dec, PairPacker::diagonal(4, 4));
    CHECK(rel(std::pow(t2.n, 4) * torus_contract(t2.tensor, 2, 2), torus_contract(t1.tensor, 4, 4)) <
          1e-10);
  }
  const Tensor a = gauge_fix(random_perturbation(0.1, 5, {2, 2, 2, 2})).tensor;
  const Type1Result t1 = type1(a, PairPacker::diagonal(2, 2), PairPacker::diagonal(2, 2));
  const Type2Result t2 = type2(t1.dec, PairPacker::diagonal(4, 4));
  CHECK(rel(std::pow(t2.n, 4) * torus_contract(t2.tensor, 2, 2), torus_contract(t1.tensor, 4, 4)) <
        1e-10);
}

TEST_CASE("full_step: N_total bookkeeping and contraction") {
  const Tensor a = normalized_ising(0.05);
  const StepResult r = full_step(a);
  CHECK(rel(r.report.n_total * torus_contract(r.tensor, 1, 1), torus_contract(a, 4, 4)) < 1e-10);
  CHECK(r.report.eps_after < r.report.eps_before);
  CHECK(r.report.n_total ==
        doctest::Approx(std::pow(r.report.n_gauge, 16) * std::pow(r.report.n_type1, 4) *
                        r.report.n_type2));
  CHECK_FALSE(r.report.truncated);
  const StepResult fp = full_step(fixed_point_lattice());
  CHECK(delta(fp.tensor) == 0.0);
  for (StepMap m : {StepMap::gauge, StepMap::type1, StepMap::full})
    CHECK(delta(apply_map(m, fixed_point_lattice(2, 2)).tensor) == 0.0);
}

TEST_CASE("truncate_bonds: keeps index 0 and the heaviest channels") {
  Tensor a = lattice_tensor(4, 3, 4, 3);
  a({0, 0, 0, 0}) = 1.0;
  a({3, 0, 0, 0}) = 0.5;
  a({1, 0, 0, 0}) = 0.1;
  a({0, 2, 0, 0}) = 0.2;
  bool cut = false;
  const Tensor t = truncate_bonds(a, 2, &cut);
  CHECK(cut);
  CHECK(t.dims() == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(t({1, 0, 0, 0}) == 0.5);
  CHECK(t({0, 1, 0, 0}) == 0.2);
  CHECK(hs_distance(truncate_bonds(a, 8), a) == 0.0);
  CHECK_THROWS_AS(truncate_bonds(a, 0), Error);
}
