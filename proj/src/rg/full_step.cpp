#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "tnrg/errors.hpp"
#include "tnrg/rg_exact.hpp"

namespace tnrg {
namespace {

std::vector<std::size_t> top_channels(const std::vector<double>& weight, std::size_t dmax) {
  std::vector<std::size_t> order(weight.size() - 1);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return weight[x] > weight[y]; });
  order.resize(std::min(order.size(), dmax - 1));
  order.insert(order.begin(), 0);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

PairPacker default_packer(std::size_t d1, std::size_t d2) { return PairPacker::diagonal(d1, d2); }

Tensor truncate_bonds(const Tensor& a, std::size_t dmax, bool* truncated) {
  if (dmax == 0) throw Error(ErrorCategory::configuration, "dmax must be at least 1");
  const std::size_t dh = a.dim(kRight), dv = a.dim(kTop);
  if (truncated) *truncated = false;
  if (dh <= dmax && dv <= dmax) return a;
  std::vector<double> wh(dh, 0.0), wv(dv, 0.0);
  const auto data = a.data();
  std::size_t off = 0;
  for (std::size_t i = 0; i < dh; ++i)
    for (std::size_t j = 0; j < dv; ++j)
      for (std::size_t k = 0; k < dh; ++k)
        for (std::size_t l = 0; l < dv; ++l) {
          const double w = data[off] * data[off];
          ++off;
          wh[i] += w;
          wh[k] += w;
          wv[j] += w;
          wv[l] += w;
        }
  const auto kh = top_channels(wh, dmax);
  const auto kv = top_channels(wv, dmax);
  if (truncated) *truncated = kh.size() < dh || kv.size() < dv;
  return select_indices(a, {kh, kv, kh, kv});
}

StepResult full_step(const Tensor& a, const StepOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  StepResult out;
  RGStepReport& rep = out.report;
  rep.eps_before = delta(a);
  rep.dims_h_before = a.dim(kRight);
  rep.dims_v_before = a.dim(kTop);

  const GaugeResult g = gauge_fix(a);
  rep.n_gauge = g.n;

  const std::size_t dh = g.tensor.dim(kRight), dv = g.tensor.dim(kTop);
  Type1Result t1 = type1(g.tensor, opt.packer(dh, dh), opt.packer(dv, dv));
  rep.n_type1 = t1.n;
  if (opt.dmax) {
    bool cut = false;
    Tensor kept = truncate_bonds(t1.tensor, *opt.dmax, &cut);
    if (cut) {
      t1.dec = decompose(kept, t1.n);
      t1.tensor = std::move(kept);
      rep.truncated = true;
    }
  }

  const std::size_t dh1 = t1.tensor.dim(kRight);
  const Type2Result t2 = type2(t1.dec, opt.packer(dh1, dh1), opt.dmax);
  rep.n_type2 = t2.n;
  rep.dangerous_norm = t2.dis.dangerous_norm;
  rep.cancellation_residual = t2.dis.cancellation_residual;
  rep.delta_s_norm = t2.split.delta_s_norm;
  rep.split_rank = t2.split.rank;
  rep.truncated = rep.truncated || t2.split.truncated;

  out.tensor = t2.tensor;
  if (opt.dmax) {
    bool cut = false;
    out.tensor = truncate_bonds(out.tensor, *opt.dmax, &cut);
    rep.truncated = rep.truncated || cut;
  }
  rep.n_total = std::pow(rep.n_gauge, 16) * std::pow(rep.n_type1, 4) * rep.n_type2;
  rep.eps_after = delta(out.tensor);
  rep.dims_h_after = out.tensor.dim(kRight);
  rep.dims_v_after = out.tensor.dim(kTop);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

StepMap parse_step_map(std::string_view name) {
  if (name == "gauge") return StepMap::gauge;
  if (name == "type1") return StepMap::type1;
  if (name == "type2") return StepMap::type2;
  if (name == "full") return StepMap::full;
  throw Error(ErrorCategory::configuration,
              "unknown map '" + std::string(name) + "' (gauge|type1|type2|full)");
}

StepResult apply_map(StepMap map, const Tensor& a, const StepOptions& opt) {
  if (map == StepMap::full) return full_step(a, opt);
  const auto start = std::chrono::steady_clock::now();
  StepResult out;
  RGStepReport& rep = out.report;
  rep.eps_before = delta(a);
  rep.dims_h_before = a.dim(kRight);
  rep.dims_v_before = a.dim(kTop);
  switch (map) {
    case StepMap::gauge: {
      GaugeResult g = gauge_fix(a);
      rep.n_gauge = rep.n_total = g.n;
      out.tensor = std::move(g.tensor);
      break;
    }
    case StepMap::type1: {
      const std::size_t dh = a.dim(kRight), dv = a.dim(kTop);
      Type1Result t1 = type1(a, opt.packer(dh, dh), opt.packer(dv, dv));
      rep.n_type1 = rep.n_total = t1.n;
      out.tensor = std::move(t1.tensor);
      break;
    }
    case StepMap::type2: {
      auto [an, n0] = normalize(a);
      const Type2Result t2 = type2(decompose(an, n0), opt.packer(a.dim(kRight), a.dim(kRight)), opt.dmax);
      rep.n_type2 = rep.n_total = t2.n * std::pow(n0, 4);
      rep.dangerous_norm = t2.dis.dangerous_norm;
      rep.cancellation_residual = t2.dis.cancellation_residual;
      rep.delta_s_norm = t2.split.delta_s_norm;
      rep.split_rank = t2.split.rank;
      rep.truncated = t2.split.truncated;
      out.tensor = t2.tensor;
      break;
    }
    case StepMap::full:
      break;
  }
  if (opt.dmax && map != StepMap::gauge) {
    bool cut = false;
    out.tensor = truncate_bonds(out.tensor, *opt.dmax, &cut);
    rep.truncated = rep.truncated || cut;
  }
  rep.eps_after = delta(out.tensor);
  rep.dims_h_after = out.tensor.dim(kRight);
  rep.dims_v_after = out.tensor.dim(kTop);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace tnrg
