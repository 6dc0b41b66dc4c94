#pragma once
// Bond-truncated coarse graining (TRG, HOTRG), corner-double-line tensors and
// free-energy flows.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tnrg/linalg.hpp"
#include "tnrg/tensor.hpp"

namespace tnrg {

struct TruncatedStep {
  Tensor tensor;  // normalized
  double n = 1.0;
  /// Largest discarded singular value (TRG) or eigenvalue (HOTRG), relative
  /// to the largest kept one; 0 when nothing was cut.
  double discarded = 0.0;
};

/// Levin-Nave step: each tensor is split along (right, top)|(left, bottom)
/// on one sublattice and (top, left)|(bottom, right) on the other, keeping at
/// most d_max singular values; four pieces around a plaquette form the new
/// tensor on the 45-degree rotated lattice with half as many sites.
TruncatedStep trg_step(const Tensor& a, std::size_t d_max);

/// Higher-order SVD step: horizontal pair contraction, then vertical; each
/// merged pair of legs is projected onto the d_max leading eigenvectors of
/// whichever side environment discards less. Four sites become one.
TruncatedStep hotrg_step(const Tensor& a, std::size_t d_max);

struct CdlSpec {
  Matrix m1, m2, m3, m4;  // k x k
};

/// A[(i1 i2), (j1 j2), (k1 k2), (l1 l2)] = M1[i1,j2] M2[j1,k1] M3[k2,l1] M4[l2,i2],
/// double indices fused row-major (i1 * k + i2).
Tensor cdl(const CdlSpec& spec);

/// One random symmetric k x k corner matrix (entries uniform in [-0.5, 0.5],
/// M[0,0] = 1) used on all four corners, so the tensor has the full lattice
/// symmetry. Deterministic per seed.
CdlSpec random_cdl_spec(std::size_t k, std::uint64_t seed);

enum class FlowAlgo { trg, hotrg };
FlowAlgo parse_flow_algo(std::string_view name);

/// Per-site log Z bookkeeping. With N_init the normalization of the input and
/// N_n that of step n, each step reduces the site count by `shrink`
/// (2 for TRG, 4 for HOTRG):
///   log Z / sites = log N_init + sum_n shrink^-(n+1) log|N_n|
///                   + shrink^-steps log|Tr A_steps|,
/// where Tr is the 1x1 torus of the final tensor.
struct FlowRecord {
  FlowAlgo algo = FlowAlgo::trg;
  std::size_t d_max = 0;
  double log_n_init = 0.0;
  std::vector<double> log_n;      // log|N_n| per step
  std::vector<std::size_t> dims;  // bond dim after each step
  std::vector<double> f_partial;  // estimate closed after each step
  std::vector<double> delta;      // distance to A_* after each step
  std::vector<double> discarded;
  double f = 0.0;
};

FlowRecord free_energy_flow(const Tensor& a, FlowAlgo algo, std::size_t steps, std::size_t d_max);

}  // namespace tnrg
