#include <cmath>
#include <string>

#include "tnrg/errors.hpp"
#include "tnrg/rg_truncated.hpp"
#include "tnrg/torus.hpp"

namespace tnrg {

FlowAlgo parse_flow_algo(std::string_view name) {
  if (name == "trg") return FlowAlgo::trg;
  if (name == "hotrg") return FlowAlgo::hotrg;
  throw Error(ErrorCategory::configuration, "unknown algorithm '" + std::string(name) + "' (trg|hotrg)");
}

FlowRecord free_energy_flow(const Tensor& a, FlowAlgo algo, std::size_t steps, std::size_t d_max) {
  if (steps == 0) throw Error(ErrorCategory::configuration, "free_energy_flow: steps must be >= 1");
  FlowRecord rec;
  rec.algo = algo;
  rec.d_max = d_max;
  auto [cur, n0] = normalize(a);
  rec.log_n_init = std::log(std::abs(n0));
  const double shrink = algo == FlowAlgo::trg ? 2.0 : 4.0;
  double acc = rec.log_n_init;
  double weight = 1.0;
  for (std::size_t s = 0; s < steps; ++s) {
    TruncatedStep st = algo == FlowAlgo::trg ? trg_step(cur, d_max) : hotrg_step(cur, d_max);
    weight /= shrink;
    const double ln = std::log(std::abs(st.n));
    acc += weight * ln;
    cur = std::move(st.tensor);
    rec.log_n.push_back(ln);
    rec.dims.push_back(cur.dim(kRight));
    rec.discarded.push_back(st.discarded);
    rec.delta.push_back(delta(cur));
    const double tr = torus_contract(cur, 1, 1);
    if (tr == 0.0) throw Error(ErrorCategory::degenerate_normalization, "free_energy_flow: zero trace");
    rec.f_partial.push_back(acc + weight * std::log(std::abs(tr)));
  }
  rec.f = rec.f_partial.back();
  return rec;
}

}  // namespace tnrg
