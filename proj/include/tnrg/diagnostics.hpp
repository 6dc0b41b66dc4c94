#pragma once
// Perturbation factories, condition checks, scaling fits and sweep studies.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnrg/pair_packer.hpp"
#include "tnrg/rg_exact.hpp"
#include "tnrg/tensor.hpp"

namespace tnrg {

// ------------------------------------------------------------ eigenvalue 1

/// Components of the blocked tensor (r1 r2, t1 t2, l1 l2, b1 b2) that the
/// perturbation must produce at linear order.
std::vector<std::array<std::size_t, 8>> eig1_block_components();

/// Lattice index (r, t, l, b) of the single site of the 2x2 block that
/// carries the nonzero legs of a block component; the internal bonds are 0.
std::array<std::size_t, 4> eig1_site_index(const std::array<std::size_t, 8>& component);

/// A_* + delta A on dims (3,3,3,3) with four entries equal to eps, placed via
/// eig1_site_index.
Tensor eig1_perturbation(double eps);

/// 0 <-> (0,0), 1 <-> (1,0), 2 <-> (0,2), the other pairs in diagonal order.
PairPacker special_packer_eig1();

/// Packer factory using special_packer_eig1 for 3x3 pairs, diagonal otherwise.
PackerFactory eig1_packer_factory();

/// Reflections of a four-leg tensor, with p applied to the legs that are
/// mapped to themselves: horizontal-line flip (FA)[i,j,k,l] = A[Pi,l,Pk,j],
/// vertical-line flip (FA)[i,j,k,l] = A[k,Pj,i,Pl].
Tensor flip_horizontal(const Tensor& a, const std::vector<std::size_t>& p);
Tensor flip_vertical(const Tensor& a, const std::vector<std::size_t>& p);

/// A_* + delta A with dense Gaussian delta A (0000 entry zero) scaled to HS
/// norm eps. Deterministic per seed.
Tensor random_perturbation(double eps, std::uint64_t seed, std::array<std::size_t, 4> dims);

// ------------------------------------------------------------ conditions

struct ConditionReport {
  double eps_ref = 0.0;
  double k = 1.0;
  double delta = 0.0;             // A1: <= k eps
  double single_leg_norm = 0.0;   // A2: <= k eps^2
  double one_circle_norm = 0.0;   // corner content, <= k eps
  double two_circle_norm = 0.0;   // A3: non-corner content <= k eps^2
  bool a1 = false, a2 = false, a3 = false;
};

/// A3 includes the A2 bounds and A2 the A1 bound, so a3 implies a2 implies a1.
ConditionReport condition_report(const Tensor& a, double eps_ref, double k = 10.0);

// ------------------------------------------------------------ scaling fits

struct ScalingFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit in natural-log units.
  double residual = 0.0;
};

/// Least squares of log y on log x. Needs >= 3 positive points.
ScalingFit scaling_fit(std::vector<std::pair<double, double>> points);

// ------------------------------------------------------------ studies

enum class Model { ising_rotated, ising_unrotated };
Model parse_model(std::string_view name);
std::string_view model_name(Model m);
Tensor make_model(Model m, double beta);

enum class ConvergenceMap { full, type1, trg };
ConvergenceMap parse_convergence_map(std::string_view name);

struct ConvergenceResult {
  std::vector<double> deltas;  // delta(A_0), delta(A_1), ...
  std::vector<RGStepReport> reports;
  /// First-step ||A_1 - A_0|| with A_0 zero padded to A_1's dims.
  double first_step_change = 0.0;
  bool truncated = false;
};

/// Iterates a map from a normalized A0. Step 1 of full/type1 is exact; later
/// inputs are cut to dmax (when given) and flagged. trg requires dmax.
ConvergenceResult convergence_run(const Tensor& a0, ConvergenceMap map, std::size_t steps,
                                  std::optional<std::size_t> dmax = std::nullopt,
                                  PackerFactory packer = default_packer);

struct ThresholdPoint {
  double beta = 0.0;
  double eps_before = 0.0;
  double eps_after = 0.0;
  bool contracts = false;
};

struct ThresholdResult {
  std::vector<ThresholdPoint> points;  // in grid order
  /// Largest starting delta of the contiguous set of contracting grid points
  /// counted from the smallest delta; empty when the smallest already fails.
  std::optional<double> eps0;
  std::optional<double> beta0;
  /// Gap between eps0 and the next larger grid delta (0 if eps0 is the top
  /// of the grid).
  double resolution = 0.0;
  bool below_grid = false;
  bool whole_grid = false;
};

/// One application of `map` per grid point; grid must be increasing.
ThresholdResult contraction_threshold(StepMap map, Model model, const std::vector<double>& beta_grid,
                                      const StepOptions& opt = {});

/// Threshold from precomputed points (sorted internally by eps_before).
ThresholdResult threshold_from_points(std::vector<ThresholdPoint> points);

/// Log-spaced grid lo..hi with count points (both ends included).
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace tnrg
