#pragma once
// Truncation-free RG step: gauge fixing, 2x2 blocking with pair fusing
// (type I) and the disentangled regrouping (type II).

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "tnrg/linalg.hpp"
#include "tnrg/pair_packer.hpp"
#include "tnrg/tensor.hpp"

namespace tnrg {

// ---------------------------------------------------------------- gauge

struct GaugePair {
  Matrix g_h, g_h_inv;
  Matrix g_v, g_v_inv;
};

struct GaugeResult {
  Tensor tensor;  // normalized
  GaugePair gauge;
  double n = 1.0;  // product of the horizontal and vertical normalizations
};

/// Conjugates the horizontal bonds by G_h = exp(B_h), B_h = |l><0| - |0><r|,
/// with l_x = A[0,0,x,0] and r_x = A[x,0,0,0] (x >= 1); G_h acts on the right
/// leg and G_h^{-1} = exp(-B_h) on the left leg. Then the same on the vertical
/// bonds (top leg gets G_v). Normalizes after each direction.
GaugeResult gauge_fix(const Tensor& a);

// ---------------------------------------------------------------- type I

/// 2x2 block of four copies of A as an 8-leg tensor with legs
/// (r1, r2, t1, t2, l1, l2, b1, b2). Horizontal pairs list the upper leg
/// first, vertical pairs the left leg first.
Tensor block_T(const Tensor& a);

/// Fuses the four pairs of block_T into a four-leg lattice tensor.
Tensor fuse_block(const Tensor& t, const PairPacker& p_h, const PairPacker& p_v);

struct Decomposition {
  Tensor fixed_part;
  Tensor one_circle;  // corner entries of A - A_*
  Tensor two_circle;  // all other entries of A - A_*
  double n = 1.0;

  Tensor reconstruct() const;
};

/// Splits a normalized four-leg tensor by corner masks.
Decomposition decompose(const Tensor& normalized, double n = 1.0);

struct Type1Result {
  Tensor tensor;  // normalized
  Decomposition dec;
  double n = 1.0;
};

Type1Result type1(const Tensor& a, const PairPacker& p_h, const PairPacker& p_v);

// ---------------------------------------------------------------- type II

struct Disentangler {
  std::size_t d = 1;  // single-leg dim; pair index is a * d + b
  Vector l, r;        // supported on pairs with both indices nonzero
  Matrix b, r_mat, r_inv;
};

struct DisentanglerResult {
  Disentangler dis;
  /// The two dangerous diagrams as one 8-leg tensor shaped like block_T:
  /// the left-pair slice (everything else 0) and its mirror on the right pair.
  Tensor dangerous;
  double dangerous_norm = 0.0;
  /// HS norm of (-B T0 + T0 B) + T_nz, where T0 is the fixed-point block and
  /// T_nz the part of T with a nonzero internal vertical bond.
  double cancellation_residual = 0.0;
  double t_nz_norm = 0.0;
};

/// `t` must be block_T(dec.reconstruct()). Throws configuration when the
/// first-order commutator fails to reduce T_nz.
DisentanglerResult build_disentangler(const Decomposition& dec, const Tensor& t);
DisentanglerResult build_disentangler(const Decomposition& dec);

/// Upper and lower halves of block_T with both internal vertical bonds
/// pinned to 0: H_u legs (r1, t1, t2, l1), H_d legs (r2, l2, b1, b2).
std::pair<Tensor, Tensor> channel0_halves(const Tensor& a);

struct SplitPair {
  Tensor s_u;  // legs (t1, t2, l1, r1, s)
  Tensor s_d;  // legs (s, b1, b2, l2, r2)
  std::size_t channel0 = 0;
};

struct SplitResult {
  Tensor s;  // R^{-1} T R, legs as block_T
  SplitPair pair;
  double delta_s_norm = 0.0;
  std::size_t rank = 0;        // channels kept beyond channel 0
  std::size_t full_rank = 0;   // numerical rank of Delta S
  double nuclear_norm = 0.0;   // sum of kept singular values
  double half_norm_u = 0.0;    // HS norm of channels 1.. of s_u
  double half_norm_d = 0.0;
  bool truncated = false;
};

/// dmax bounds the internal bond dimension (channel 0 included).
SplitResult split_S(const Decomposition& dec, const Disentangler& dis, const Tensor& t,
                    std::optional<std::size_t> dmax = std::nullopt);

/// Regroups a split pair into the U tensor (S_d of the cell above on S_u of
/// the cell below), unnormalized, with legs (right, top, left, bottom); the
/// horizontal pairs are (upper, lower) fused with p_h.
Tensor regroup_U(const SplitPair& sp, const PairPacker& p_h);

struct Type2Result {
  Tensor tensor;  // normalized
  double n = 1.0;
  DisentanglerResult dis;
  SplitResult split;
};

Type2Result type2(const Decomposition& dec, const PairPacker& p_h,
                  std::optional<std::size_t> dmax = std::nullopt);

// ---------------------------------------------------------------- full step

using PackerFactory = std::function<PairPacker(std::size_t, std::size_t)>;
PairPacker default_packer(std::size_t d1, std::size_t d2);

enum class StepMap { gauge, type1, type2, full };
StepMap parse_step_map(std::string_view name);

struct StepOptions {
  PackerFactory packer = default_packer;
  /// Optional truncation of the type I output legs, the split channels and
  /// the step output. Off by default.
  std::optional<std::size_t> dmax;
};

struct RGStepReport {
  double eps_before = 0.0;
  double eps_after = 0.0;
  double n_gauge = 1.0;
  double n_type1 = 1.0;
  double n_type2 = 1.0;
  /// torus(A, 4, 4) = n_total * torus(A', 1, 1) for the full map
  /// (or the matching block sizes of the partial maps).
  double n_total = 1.0;
  double dangerous_norm = 0.0;
  double cancellation_residual = 0.0;
  double delta_s_norm = 0.0;
  std::size_t split_rank = 0;
  std::size_t dims_h_before = 0, dims_v_before = 0;
  std::size_t dims_h_after = 0, dims_v_after = 0;
  bool truncated = false;
  double seconds = 0.0;
};

struct StepResult {
  Tensor tensor;
  RGStepReport report;
};

/// gauge_fix, then type1, then type2. The input must be normalized.
StepResult full_step(const Tensor& a, const StepOptions& opt = {});
/// One application of a partial or full map, normalized output.
StepResult apply_map(StepMap map, const Tensor& a, const StepOptions& opt = {});

/// Keeps index 0 and the dmax-1 other indices of largest squared weight on
/// each bond direction (right/left share one selection, top/bottom another).
/// Ties keep the lower index. Returns the input unchanged when it fits.
Tensor truncate_bonds(const Tensor& a, std::size_t dmax, bool* truncated = nullptr);

}  // namespace tnrg
