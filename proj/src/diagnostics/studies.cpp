#include <algorithm>
#include <cmath>
#include <string>

#include "tnrg/diagnostics.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/ising.hpp"
#include "tnrg/rg_truncated.hpp"

namespace tnrg {

Model parse_model(std::string_view name) {
  if (name == "ising-rotated") return Model::ising_rotated;
  if (name == "ising-unrotated") return Model::ising_unrotated;
  throw Error(ErrorCategory::configuration,
              "unknown model '" + std::string(name) + "' (ising-rotated|ising-unrotated)");
}

std::string_view model_name(Model m) {
  return m == Model::ising_rotated ? "ising-rotated" : "ising-unrotated";
}

Tensor make_model(Model m, double beta) {
  return m == Model::ising_rotated ? ising_rotated(beta) : ising_unrotated(beta);
}

ConvergenceMap parse_convergence_map(std::string_view name) {
  if (name == "full") return ConvergenceMap::full;
  if (name == "type1") return ConvergenceMap::type1;
  if (name == "trg") return ConvergenceMap::trg;
  throw Error(ErrorCategory::configuration, "unknown map '" + std::string(name) + "' (full|type1|trg)");
}

ConvergenceResult convergence_run(const Tensor& a0, ConvergenceMap map, std::size_t steps,
                                  std::optional<std::size_t> dmax, PackerFactory packer) {
  if (steps == 0) throw Error(ErrorCategory::configuration, "convergence_run: steps must be >= 1");
  if (map == ConvergenceMap::trg && !dmax)
    throw Error(ErrorCategory::configuration, "convergence_run: the trg map needs dmax");
  ConvergenceResult out;
  Tensor cur = a0;
  out.deltas.push_back(delta(cur));
  for (std::size_t s = 0; s < steps; ++s) {
    Tensor next;
    RGStepReport rep;
    if (map == ConvergenceMap::trg) {
      rep.eps_before = delta(cur);
      rep.dims_h_before = cur.dim(kRight);
      rep.dims_v_before = cur.dim(kTop);
      TruncatedStep st = trg_step(cur, *dmax);
      rep.n_total = st.n;
      rep.truncated = st.discarded > 0.0;
      next = std::move(st.tensor);
      rep.eps_after = delta(next);
      rep.dims_h_after = next.dim(kRight);
      rep.dims_v_after = next.dim(kTop);
    } else {
      StepOptions opt;
      opt.packer = packer;
      if (s > 0 && dmax) {
        bool cut = false;
        cur = truncate_bonds(cur, *dmax, &cut);
        opt.dmax = dmax;
        out.truncated = out.truncated || cut;
      }
      StepResult r = apply_map(map == ConvergenceMap::full ? StepMap::full : StepMap::type1, cur, opt);
      rep = r.report;
      next = std::move(r.tensor);
    }
    if (s == 0) {
      const Tensor padded = embed(cur, next.dims());
      out.first_step_change = hs_distance(next, padded);
    }
    out.truncated = out.truncated || rep.truncated;
    out.reports.push_back(rep);
    out.deltas.push_back(delta(next));
    cur = std::move(next);
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw Error(ErrorCategory::configuration, "log grid needs 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ThresholdResult threshold_from_points(std::vector<ThresholdPoint> points) {
  ThresholdResult out;
  out.points = points;
  std::stable_sort(points.begin(), points.end(),
                   [](const ThresholdPoint& x, const ThresholdPoint& y) { return x.eps_before < y.eps_before; });
  std::size_t prefix = 0;
  while (prefix < points.size() && points[prefix].contracts) ++prefix;
  if (prefix == 0) {
    out.below_grid = true;
    return out;
  }
  out.eps0 = points[prefix - 1].eps_before;
  out.beta0 = points[prefix - 1].beta;
  out.whole_grid = prefix == points.size();
  out.resolution = out.whole_grid ? 0.0 : points[prefix].eps_before - *out.eps0;
  return out;
}

ThresholdResult contraction_threshold(StepMap map, Model model, const std::vector<double>& beta_grid,
                                      const StepOptions& opt) {
  if (beta_grid.empty()) throw Error(ErrorCategory::configuration, "threshold: empty grid");
  if (!std::is_sorted(beta_grid.begin(), beta_grid.end()))
    throw Error(ErrorCategory::configuration, "threshold: grid must be increasing");
  std::vector<ThresholdPoint> pts;
  for (double beta : beta_grid) {
    const Tensor a = normalize(make_model(model, beta)).first;
    const StepResult r = apply_map(map, a, opt);
    pts.push_back({beta, r.report.eps_before, r.report.eps_after, r.report.eps_after < r.report.eps_before});
  }
  return threshold_from_points(std::move(pts));
}

}  // namespace tnrg
