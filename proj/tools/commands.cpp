#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "tnrg/diagnostics.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/ising.hpp"
#include "tnrg/linalg.hpp"
#include "tnrg/rg_exact.hpp"
#include "tnrg/rg_truncated.hpp"
#include "tnrg/tensor_io.hpp"
#include "tnrg/torus.hpp"

namespace tnrg::cli {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCategory::configuration, msg); }

ordered_json fit_json(const ScalingFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual},
          {"points", f.points.size()}};
}

ordered_json report_json(const RGStepReport& r) {
  return {{"eps_before", r.eps_before},
          {"eps_after", r.eps_after},
          {"n_gauge", r.n_gauge},
          {"n_type1", r.n_type1},
          {"n_type2", r.n_type2},
          {"n_total", r.n_total},
          {"dangerous_norm", r.dangerous_norm},
          {"cancellation_residual", r.cancellation_residual},
          {"delta_s_norm", r.delta_s_norm},
          {"split_rank", r.split_rank},
          {"dims_before", {r.dims_h_before, r.dims_v_before}},
          {"dims_after", {r.dims_h_after, r.dims_v_after}},
          {"truncated", r.truncated},
          {"seconds", r.seconds}};
}

PackerFactory packer_for(const Options& o) {
  return o.model == "eig1" ? eig1_packer_factory() : PackerFactory(default_packer);
}

std::size_t numerical_rank(const Matrix& m) {
  const Svd s = svd(m);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) > 1e-10 * s.s(0)) ++r;
  return r;
}

}  // namespace

Output run_ising_tensor(const Options& o) {
  if (o.model != "ising-rotated" && o.model != "ising-unrotated")
    bad("ising-tensor: model must be ising-rotated or ising-unrotated");
  if (!o.beta) bad("ising-tensor needs --beta");
  const Tensor a = build_model(o, *o.beta);
  if (!o.save.empty()) save_tensor(o.save, a);
  Output out;
  out.csv = Csv({"model", "beta", "dim_h", "dim_v", "a0000", "hs_norm", "delta_normalized"});
  out.csv.row()
      .cell(o.model)
      .cell(*o.beta)
      .cell(a.dim(kRight))
      .cell(a.dim(kTop))
      .cell(a({0, 0, 0, 0}))
      .cell(hs_norm(a))
      .cell(delta(normalize(a).first));
  out.results["saved_to"] = o.save;
  return out;
}

Output run_rg(const Options& o) {
  const StepMap map = parse_step_map(o.map);
  if (o.steps == 0) bad("steps must be >= 1");
  const std::vector<double> params = sweep_points(o, 1);
  const std::string pname = sweep_parameter(o.model);
  const PackerFactory packer = packer_for(o);

  struct Point {
    std::vector<RGStepReport> reports;
    Tensor last;
  };
  const auto points = parallel_map<Point>(params.size(), o.jobs, [&](std::size_t i) {
    Point p;
    Tensor cur = normalize(build_model(o, params[i])).first;
    for (std::size_t s = 0; s < o.steps; ++s) {
      StepOptions opt{packer, std::nullopt};
      bool cut = false;
      if (s > 0 && o.dmax) {
        cur = truncate_bonds(cur, *o.dmax, &cut);
        opt.dmax = o.dmax;
      }
      StepResult r = apply_map(map, cur, opt);
      r.report.truncated = r.report.truncated || cut;
      p.reports.push_back(r.report);
      cur = std::move(r.tensor);
    }
    p.last = std::move(cur);
    return p;
  });

  Output out;
  out.csv = Csv({"index", pname.empty() ? "param" : pname, "step", "eps_before", "eps_after",
                 "N_total", "dangerous_norm", "cancellation_residual", "delta_s_norm",
                 "split_rank", "dims_h", "dims_v", "truncated"});
  ordered_json rows = ordered_json::array();
  std::vector<std::pair<double, double>> fit_pts;
  bool positive = true;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t s = 0; s < points[i].reports.size(); ++s) {
      const RGStepReport& r = points[i].reports[s];
      out.csv.row()
          .cell(i)
          .cell(params[i])
          .cell(s + 1)
          .cell(r.eps_before)
          .cell(r.eps_after)
          .cell(r.n_total)
          .cell(r.dangerous_norm)
          .cell(r.cancellation_residual)
          .cell(r.delta_s_norm)
          .cell(r.split_rank)
          .cell(r.dims_h_after)
          .cell(r.dims_v_after)
          .cell(r.truncated);
      ordered_json j = report_json(r);
      j["index"] = i;
      j["param"] = params[i];
      j["step"] = s + 1;
      rows.push_back(std::move(j));
      if (s == 0) {
        fit_pts.push_back({r.eps_before, r.eps_after});
        positive = positive && r.eps_before > 0 && r.eps_after > 0;
      }
    }
  out.results["steps"] = std::move(rows);
  if (fit_pts.size() >= 3 && positive) {
    out.results["fit"] = fit_json(scaling_fit(fit_pts));
    out.results["fit"]["of"] = "log eps_after against log eps_before, first step";
  }
  if (!o.save.empty() && points.size() == 1) save_tensor(o.save, points[0].last);
  return out;
}

Output run_torus_z(const Options& o) {
  const std::size_t lx = o.lx.value_or(o.l.value_or(0)), ly = o.ly.value_or(o.l.value_or(0));
  if (lx == 0 || ly == 0) bad("torus-z needs --L or both --Lx and --Ly (>= 1)");
  const std::vector<double> params = sweep_points(o, 1);
  const std::string pname = sweep_parameter(o.model);
  Output out;
  out.csv = Csv({pname.empty() ? "param" : pname, "lx", "ly", "z", "z_enumerated", "rel_diff"});
  ordered_json rows = ordered_json::array();
  for (double p : params) {
    const Tensor a = build_model(o, p);
    const double z = torus_contract(a, lx, ly);
    ordered_json j{{"param", p}, {"lx", lx}, {"ly", ly}, {"z", z}};
    out.csv.row().cell(p).cell(lx).cell(ly).cell(z);
    if (o.model == "ising-unrotated" && lx * ly <= 24) {
      const double ze = ising_partition_enumerated(p, lx, ly);
      const double rel = std::abs(z - ze) / std::abs(ze);
      out.csv.cell(ze).cell(rel);
      j["z_enumerated"] = ze;
      j["rel_diff"] = rel;
      if (!(rel <= 1e-10)) out.status = exit_code(ErrorCategory::failed_check);
    } else {
      out.csv.cell(std::string()).cell(std::string());
    }
    rows.push_back(std::move(j));
  }
  out.results["tori"] = std::move(rows);
  out.results["oracle_tolerance"] = 1e-10;
  return out;
}

Output run_free_energy(const Options& o) {
  const FlowAlgo algo = parse_flow_algo(o.algo);
  if (!o.dmax) bad("free-energy needs --dmax");
  if (o.steps == 0) bad("steps must be >= 1");
  if (o.model != "ising-unrotated" && o.model != "ising-rotated" && o.model != "file")
    bad("free-energy: model must be ising-unrotated, ising-rotated or file");
  const std::vector<double> params = sweep_points(o, 1);
  const bool exact_known = o.model == "ising-unrotated";
  const auto flows = parallel_map<FlowRecord>(params.size(), o.jobs, [&](std::size_t i) {
    return free_energy_flow(build_model(o, params[i]), algo, o.steps, *o.dmax);
  });
  Output out;
  ordered_json rows = ordered_json::array();
  if (params.size() == 1) {
    const FlowRecord& r = flows[0];
    out.csv = Csv({"step", "dim", "log_n", "delta", "discarded", "f_partial"});
    for (std::size_t s = 0; s < r.log_n.size(); ++s)
      out.csv.row()
          .cell(s + 1)
          .cell(r.dims[s])
          .cell(r.log_n[s])
          .cell(r.delta[s])
          .cell(r.discarded[s])
          .cell(r.f_partial[s]);
  } else {
    out.csv = Csv({"beta", "f", "exact", "error", "final_dim"});
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const FlowRecord& r = flows[i];
    ordered_json j{{"beta", params[i]}, {"f", r.f}, {"log_n_init", r.log_n_init}};
    std::optional<double> exact;
    if (exact_known) exact = exact_free_energy_reference(params[i]);
    j["exact"] = exact ? ordered_json(*exact) : ordered_json(nullptr);
    j["error"] = exact ? ordered_json(r.f - *exact) : ordered_json(nullptr);
    if (params.size() > 1) {
      out.csv.row().cell(params[i]).cell(r.f);
      if (exact)
        out.csv.cell(*exact).cell(r.f - *exact);
      else
        out.csv.cell(std::string()).cell(std::string());
      out.csv.cell(r.dims.back());
    }
    rows.push_back(std::move(j));
  }
  out.results["algo"] = o.algo;
  out.results["d_max"] = *o.dmax;
  out.results["flows"] = std::move(rows);
  if (params.size() == 1) {
    out.results["f"] = flows[0].f;
    out.results["exact"] = out.results["flows"][0]["exact"];
    out.results["error"] = out.results["flows"][0]["error"];
  }
  return out;
}

Output run_cdl_demo(const Options& o) {
  if (o.k < 1) bad("k must be >= 1");
  const std::size_t d = o.k * o.k;
  const std::size_t dmax = o.dmax.value_or(d * d);
  const Tensor a = normalize(cdl(random_cdl_spec(o.k, o.seed))).first;
  const ConvergenceResult r = convergence_run(a, ConvergenceMap::trg, o.steps, dmax);
  Output out;
  out.csv = Csv({"step", "delta", "dim", "n"});
  out.csv.row().cell(std::size_t{0}).cell(r.deltas[0]).cell(a.dim(kRight)).cell(1.0);
  for (std::size_t s = 0; s < r.reports.size(); ++s)
    out.csv.row()
        .cell(s + 1)
        .cell(r.deltas[s + 1])
        .cell(r.reports[s].dims_h_after)
        .cell(r.reports[s].n_total);

  // Plain 2x2 blocking keeps the corner-line structure: both adjacent-leg
  // unfoldings are crossed by two lines of dimension k.
  const Tensor b =
      fuse_block(block_T(a), PairPacker::diagonal(d, d), PairPacker::diagonal(d, d));
  const std::size_t bound = d;
  const std::size_t ra1 = numerical_rank(unfold(a, 2)),
                    ra2 = numerical_rank(unfold(a.permuted({1, 2, 3, 0}), 2));
  const std::size_t rb1 = numerical_rank(unfold(b, 2)),
                    rb2 = numerical_rank(unfold(b.permuted({1, 2, 3, 0}), 2));
  const bool ok = ra1 <= bound && ra2 <= bound && rb1 <= bound && rb2 <= bound;
  out.results["k"] = o.k;
  out.results["d_max"] = dmax;
  out.results["deltas"] = r.deltas;
  out.results["blocking_rank"] = {
      {"bound", bound}, {"input", {ra1, ra2}}, {"blocked", {rb1, rb2}}, {"ok", ok}};
  if (!ok) out.status = exit_code(ErrorCategory::failed_check);
  return out;
}

Output run_eig1_demo(const Options& o) {
  const std::string sweep = o.eps_sweep.empty() ? "1e-3:1e-1:5" : o.eps_sweep;
  const std::vector<double> eps = parse_sweep(sweep, "eps-sweep", 3).points();
  const bool do_type1 = o.map == "type1" || o.map == "both";
  const bool do_full = o.map == "full" || o.map == "both";
  if (!do_type1 && !do_full) bad("eig1-demo: map must be type1, full or both");
  struct Row {
    double change = 0.0, before = 0.0, after = 0.0;
  };
  const auto rows = parallel_map<Row>(eps.size(), o.jobs, [&](std::size_t i) {
    Row r;
    const Tensor a = eig1_perturbation(eps[i]);
    if (do_type1)
      r.change = convergence_run(a, ConvergenceMap::type1, 1, std::nullopt, eig1_packer_factory())
                     .first_step_change;
    if (do_full) {
      const StepResult f = full_step(a, StepOptions{eig1_packer_factory(), std::nullopt});
      r.before = f.report.eps_before;
      r.after = f.report.eps_after;
    }
    return r;
  });
  Output out;
  out.csv = Csv({"eps", "type1_change", "type1_change_over_eps", "full_eps_before",
                 "full_eps_after", "full_ratio"});
  std::vector<std::pair<double, double>> pts;
  double worst = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const Row& r = rows[i];
    out.csv.row().cell(eps[i]);
    if (do_type1) {
      out.csv.cell(r.change).cell(r.change / eps[i]);
      pts.push_back({eps[i], r.change});
    } else {
      out.csv.cell(std::string()).cell(std::string());
    }
    if (do_full) {
      out.csv.cell(r.before).cell(r.after).cell(r.after / r.before);
      worst = std::max(worst, r.after / r.before);
    } else {
      out.csv.cell(std::string()).cell(std::string()).cell(std::string());
    }
  }
  if (do_type1) out.results["type1_fit"] = fit_json(scaling_fit(pts));
  if (do_full) out.results["full_max_ratio"] = worst;
  return out;
}

Output run_conditions(const Options& o) {
  if (o.in.empty()) bad("conditions needs --in");
  if (!o.eps) bad("conditions needs --eps");
  const auto [a, n] = normalize(load_tensor(o.in));
  const ConditionReport c = condition_report(a, *o.eps, o.cond_k);
  Output out;
  out.csv = Csv({"eps_ref", "k", "delta", "single_leg_norm", "one_circle_norm", "two_circle_norm",
                 "a1", "a2", "a3"});
  out.csv.row()
      .cell(c.eps_ref)
      .cell(c.k)
      .cell(c.delta)
      .cell(c.single_leg_norm)
      .cell(c.one_circle_norm)
      .cell(c.two_circle_norm)
      .cell(c.a1)
      .cell(c.a2)
      .cell(c.a3);
  out.results["normalization"] = n;
  return out;
}

Output run_threshold(const Options& o) {
  const StepMap map = parse_step_map(o.map);
  const Model model = parse_model(o.model);
  const std::string grid = o.beta_sweep.empty() ? "0.02:0.4:9" : o.beta_sweep;
  const std::vector<double> betas = parse_sweep(grid, "beta-grid", 2).points();
  StepOptions opt;
  opt.dmax = o.dmax;
  const auto pts = parallel_map<ThresholdPoint>(betas.size(), o.jobs, [&](std::size_t i) {
    const StepResult r = apply_map(map, normalize(make_model(model, betas[i])).first, opt);
    return ThresholdPoint{betas[i], r.report.eps_before, r.report.eps_after,
                          r.report.eps_after < r.report.eps_before};
  });
  const ThresholdResult t = threshold_from_points(pts);
  Output out;
  out.csv = Csv({"beta", "eps_before", "eps_after", "contracts"});
  for (const ThresholdPoint& p : t.points)
    out.csv.row().cell(p.beta).cell(p.eps_before).cell(p.eps_after).cell(p.contracts);
  out.results["eps0"] = t.eps0 ? ordered_json(*t.eps0) : ordered_json(nullptr);
  out.results["beta0"] = t.beta0 ? ordered_json(*t.beta0) : ordered_json(nullptr);
  out.results["resolution"] = t.resolution;
  out.results["below_grid"] = t.below_grid;
  out.results["whole_grid"] = t.whole_grid;
  return out;
}

Output run_exponent_fit(const Options& o) {
  if (o.in.empty()) bad("exponent-fit needs --in");
  std::ifstream in(o.in);
  if (!in) throw Error(ErrorCategory::invalid_input, "cannot open " + o.in);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCategory::invalid_input, o.in + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    bad(o.in + ": no column '" + name + "'");
  };
  const std::size_t cx = column(o.x_col), cy = column(o.y_col);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    auto num = [&](std::size_t c) {
      try {
        std::size_t used = 0;
        const double v = std::stod(f.at(c), &used);
        if (used != f[c].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorCategory::invalid_input, o.in + ":" + std::to_string(n) + ": column " +
                                                      std::to_string(c + 1) + " is not a number");
      }
    };
    pts.push_back({num(cx), num(cy)});
  }
  const ScalingFit f = scaling_fit(pts);
  Output out;
  out.csv = Csv({"x", "y", "points", "slope", "intercept", "residual"});
  out.csv.row().cell(o.x_col).cell(o.y_col).cell(f.points.size()).cell(f.slope).cell(f.intercept).cell(
      f.residual);
  out.results["fit"] = fit_json(f);
  return out;
}

}  // namespace tnrg::cli
