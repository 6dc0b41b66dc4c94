#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/diagnostics.hpp"
#include "tnrg/ising.hpp"
#include "tnrg/masks.hpp"
#include "tnrg/rg_exact.hpp"

using namespace tnrg;

namespace {

// Unit-norm direction of the eig1 perturbation: four entries of 1.
Tensor eig1_direction() { return (eig1_perturbation(1.0) - fixed_point_lattice(3, 3)); }

}  // namespace

TEST_CASE("eig1: four equal entries, symmetric under both reflections") {
  const double eps = 0.01;
  const Tensor d = deviation(eig1_perturbation(eps));
  int nz = 0;
  for (double x : d.data())
    if (x != 0.0) {
      ++nz;
      CHECK(x == eps);
    }
  CHECK(nz == 4);
  const std::vector<std::size_t> p{0, 2, 1};
  CHECK(hs_distance(flip_horizontal(d, p), d) == 0.0);
  CHECK(hs_distance(flip_vertical(d, p), d) == 0.0);
}

TEST_CASE("eig1: placement derived from the linear order of blocking") {
  // Central difference of block_T around A_*: exact up to O(h^2).
  const double h = 1e-4;
  const Tensor dir = eig1_direction();
  const Tensor a0 = fixed_point_lattice(3, 3);
  const Tensor lin = (1.0 / (2 * h)) * (block_T(a0 + h * dir) - block_T(a0 - h * dir));
  double listed = 0.0;
  for (const auto& c : eig1_block_components()) {
    const std::size_t idx[8] = {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]};
    CHECK(lin.at(idx) == doctest::Approx(1.0).epsilon(1e-8));
    listed += 1.0;
  }
  // Nothing else at linear order.
  CHECK(hs_norm(lin) * hs_norm(lin) == doctest::Approx(listed).epsilon(1e-8));

  // Through the special packer the linear part of type1 is delta A itself.
  const PairPacker j = special_packer_eig1();
  auto t1 = [&](double s) { return type1(a0 + s * dir, j, j).tensor; };
  const Tensor lin1 = (1.0 / (2 * h)) * (t1(h) - t1(-h));
  const std::vector<std::size_t> big{9, 9, 9, 9};
  CHECK(hs_distance(lin1, embed(dir, big)) < 1e-7);
}

TEST_CASE("eig1: special packer") {
  const PairPacker j = special_packer_eig1();
  CHECK(j.fuse(0, 0) == 0);
  CHECK(j.fuse(1, 0) == 1);
  CHECK(j.fuse(0, 2) == 2);
  std::vector<int> seen(9, 0);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) ++seen[j.fuse(a, b)];
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("eig1: ||delta A'|| does not depend on the pairing choice") {
  const Tensor a = eig1_perturbation(1e-2);
  const StepResult x = full_step(a, StepOptions{eig1_packer_factory(), std::nullopt});
  const StepResult y = full_step(a, StepOptions{default_packer, std::nullopt});
  CHECK(x.report.eps_after == doctest::Approx(y.report.eps_after).epsilon(1e-9));
  const Type1Result u = type1(a, special_packer_eig1(), special_packer_eig1());
  const Type1Result v = type1(a, PairPacker::row_major(3, 3), PairPacker::diagonal(3, 3));
  CHECK(delta(u.tensor) == doctest::Approx(delta(v.tensor)).epsilon(1e-14));
}

TEST_CASE("random_perturbation: norm and determinism") {
  const Tensor a = random_perturbation(0.03, 7, {2, 3, 2, 3});
  CHECK(std::abs(delta(a) - 0.03) < 1e-12);
  CHECK(a({0, 0, 0, 0}) == 1.0);
  CHECK(hs_distance(a, random_perturbation(0.03, 7, {2, 3, 2, 3})) == 0.0);
  CHECK(hs_distance(a, random_perturbation(0.03, 8, {2, 3, 2, 3})) > 0.0);
}

TEST_CASE("condition_report: fixed point, parity and the type1 sweep") {
  const ConditionReport f = condition_report(fixed_point_lattice(2, 2), 0.1);
  CHECK(f.delta == 0.0);
  CHECK(f.single_leg_norm == 0.0);
  CHECK(f.two_circle_norm == 0.0);
  CHECK(f.a3);
  const ConditionReport is = condition_report(normalize(ising_unrotated(0.2)).first, 0.2);
  CHECK(is.single_leg_norm == 0.0);
  for (double eps : log_grid(1e-3, 1e-1, 5)) {
    const Tensor g = gauge_fix(random_perturbation(eps, 1, {2, 2, 2, 2})).tensor;
    const Type1Result t = type1(g, PairPacker::diagonal(2, 2), PairPacker::diagonal(2, 2));
    const ConditionReport r = condition_report(t.tensor, eps);
    CHECK(r.a3);
    CHECK(r.a2);
    CHECK(r.a1);
  }
  // Monotone: a failed A1 fails everything above it.
  const ConditionReport big = condition_report(random_perturbation(1.0, 2, {2, 2, 2, 2}), 1e-3);
  CHECK_FALSE(big.a1);
  CHECK_FALSE(big.a2);
  CHECK_FALSE(big.a3);
}

TEST_CASE("scaling_fit: recovers exponents") {
  std::vector<std::pair<double, double>> p;
  for (double x : {1e-3, 3e-3, 1e-2, 5e-2, 1e-1}) p.push_back({x, std::pow(x, 1.5)});
  const ScalingFit f = scaling_fit(p);
  CHECK(std::abs(f.slope - 1.5) < 1e-12);
  CHECK(f.residual < 1e-12);
  for (auto& [x, y] : p) y = 7.0 * x * x;
  const ScalingFit g = scaling_fit(p);
  CHECK(std::abs(g.slope - 2.0) < 1e-12);
  CHECK(std::abs(g.intercept - std::log(7.0)) < 1e-11);
  p[2].second = 0.0;
  CHECK_THROWS_AS(scaling_fit(p), Error);
  CHECK_THROWS_AS(scaling_fit({{1.0, 1.0}, {2.0, 2.0}}), Error);
}

TEST_CASE("convergence_run: fixed point and arguments") {
  const ConvergenceResult r = convergence_run(fixed_point_lattice(), ConvergenceMap::full, 2);
  for (double d : r.deltas) CHECK(d == 0.0);
  CHECK_THROWS_AS(convergence_run(fixed_point_lattice(), ConvergenceMap::trg, 2), Error);
  CHECK_THROWS_AS(convergence_run(fixed_point_lattice(), ConvergenceMap::full, 0), Error);
  CHECK(parse_convergence_map("type1") == ConvergenceMap::type1);
}

TEST_CASE("threshold: grid cases") {
  const ThresholdResult t =
      contraction_threshold(StepMap::full, Model::ising_unrotated, log_grid(0.01, 0.05, 3));
  REQUIRE(t.eps0);
  CHECK(t.whole_grid);
  CHECK(*t.eps0 == t.points.back().eps_before);
  CHECK(t.resolution == 0.0);
  // Decreasing beta gives decreasing starting delta.
  for (std::size_t i = 1; i < t.points.size(); ++i)
    CHECK(t.points[i].eps_before > t.points[i - 1].eps_before);
  const ThresholdResult none = threshold_from_points({{0.5, 1.0, 2.0, false}, {0.6, 1.2, 3.0, false}});
  CHECK(none.below_grid);
  CHECK_FALSE(none.eps0);
  const ThresholdResult mid = threshold_from_points(
      {{0.1, 0.2, 0.1, true}, {0.2, 0.4, 0.3, true}, {0.3, 0.7, 0.9, false}});
  REQUIRE(mid.eps0);
  CHECK(*mid.eps0 == 0.4);
  CHECK(*mid.beta0 == 0.2);
  CHECK(mid.resolution == doctest::Approx(0.3));
}

TEST_CASE("log_grid and model names") {
  const auto g = log_grid(0.02, 0.1, 9);
  CHECK(g.size() == 9);
  CHECK(g.front() == 0.02);
  CHECK(g.back() == 0.1);
  CHECK(g[4] == doctest::Approx(std::sqrt(0.02 * 0.1)));
  CHECK(parse_model("ising-unrotated") == Model::ising_unrotated);
  CHECK(model_name(Model::ising_rotated) == "ising-rotated");
  CHECK_THROWS_AS(parse_model("potts"), Error);
}
