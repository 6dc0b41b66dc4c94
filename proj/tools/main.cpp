#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "tnrg/errors.hpp"

#ifndef TNRG_VERSION
#define TNRG_VERSION "unknown"
#endif

namespace tnrg::cli {
namespace {

using Runner = std::function<Output(const Options&)>;

struct Command {
  CLI::App* app = nullptr;
  Runner run;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

template <class T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json config_json(const Options& o) {
  return {{"model", o.model},         {"map", o.map},
          {"algo", o.algo},           {"beta", opt_json(o.beta)},
          {"beta_sweep", o.beta_sweep}, {"eps", opt_json(o.eps)},
          {"eps_sweep", o.eps_sweep}, {"steps", o.steps},
          {"dmax", opt_json(o.dmax)}, {"seed", o.seed},
          {"dims", o.dims},           {"k", o.k},
          {"L", opt_json(o.l)},       {"Lx", opt_json(o.lx)},
          {"Ly", opt_json(o.ly)},     {"in", o.in},
          {"save", o.save},           {"csv", o.out},
          {"report", o.json},         {"x", o.x_col},
          {"y", o.y_col},             {"K", o.cond_k},
          {"jobs", o.jobs},           {"max_elements", opt_json(o.max_elements)},
          {"config", o.config}};
}

void common(CLI::App* s, Options& o, bool out_is_csv) {
  s->add_option("--config", o.config, "key = value file; flags on the command line win");
  if (out_is_csv)
    s->add_option("--csv,--out", o.out, "CSV output path (default: stdout)");
  else
    s->add_option("--csv", o.out, "CSV output path (default: stdout)");
  s->add_option("--report,--json", o.json, "JSON report path (default: CSV path + .json)");
  s->add_option("--jobs", o.jobs, "worker threads for sweeps (0: all cores)");
  s->add_option("--max-elements", o.max_elements, "resource guard in tensor elements")
      ->check(CLI::PositiveNumber);
}

void model_opts(CLI::App* s, Options& o) {
  s->add_option("--model", o.model, "ising-rotated|ising-unrotated|file|cdl|eig1|random")
      ->capture_default_str();
  s->add_option("--beta", o.beta);
  s->add_option("--beta-sweep", o.beta_sweep, "lo:hi:count, log spaced");
  s->add_option("--eps", o.eps);
  s->add_option("--eps-sweep", o.eps_sweep, "lo:hi:count, log spaced");
  s->add_option("--seed", o.seed)->capture_default_str();
  s->add_option("--dims", o.dims, "random model leg dims r,t,l,b")->capture_default_str();
  s->add_option("--k", o.k, "cdl corner dimension")->capture_default_str();
  s->add_option("--in", o.in, "tensor file for model 'file'");
}

/// Builds the full command tree bound to `o`.
std::map<std::string, Command> build(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::map<std::string, Command> cmds;
  auto add = [&](const std::string& name, const std::string& help, Runner run) {
    CLI::App* s = app.add_subcommand(name, help);
    cmds[name] = {s, std::move(run)};
    return s;
  };

  auto* it = add("ising-tensor", "write the Ising tensor in the dump format", run_ising_tensor);
  it->add_option("--rep", o.rep, "rotated|unrotated")
      ->check(CLI::IsMember({"rotated", "unrotated"}))
      ->capture_default_str();
  it->add_option("--beta", o.beta)->required();
  it->add_option("--out,--save", o.save, "tensor dump path (.bin binary, else text)");
  common(it, o, false);
  it->final_callback([&o] { o.model = "ising-" + o.rep; });

  auto* rg = add("rg-run", "exact RG steps over a sweep", run_rg);
  model_opts(rg, o);
  rg->add_option("--map", o.map, "gauge|type1|type2|full")->capture_default_str();
  rg->add_option("--steps", o.steps)->capture_default_str();
  rg->add_option("--dmax", o.dmax, "bond cap from step 2 on");
  rg->add_option("--save", o.save, "final tensor of a single-point run");
  common(rg, o, true);

  auto* tz = add("torus-z", "partition function of a periodic patch", run_torus_z);
  model_opts(tz, o);
  tz->add_option("--L", o.l);
  tz->add_option("--Lx", o.lx);
  tz->add_option("--Ly", o.ly);
  common(tz, o, true);

  auto* fe = add("free-energy", "free energy per site by TRG or HOTRG", run_free_energy);
  fe->add_option("--algo", o.algo, "trg|hotrg")->capture_default_str();
  fe->add_option("--model", o.model, "ising-unrotated|ising-rotated|file")->capture_default_str();
  fe->add_option("--beta", o.beta);
  fe->add_option("--beta-sweep", o.beta_sweep, "lo:hi:count, log spaced");
  fe->add_option("--dmax", o.dmax)->required();
  fe->add_option("--steps", o.steps);
  fe->add_option("--in", o.in);
  common(fe, o, true);

  auto* cd = add("cdl-demo", "TRG on a corner-double-line tensor", run_cdl_demo);
  cd->add_option("--k", o.k)->capture_default_str();
  cd->add_option("--seed", o.seed)->capture_default_str();
  cd->add_option("--steps", o.steps);
  cd->add_option("--dmax", o.dmax, "default k^4");
  common(cd, o, true);

  auto* e1 = add("eig1-demo", "the eigenvalue-1 perturbation under type1 and full", run_eig1_demo);
  e1->add_option("--eps-sweep", o.eps_sweep, "lo:hi:count, default 1e-3:1e-1:5");
  e1->add_option("--map", o.map, "type1|full|both");
  common(e1, o, true);

  auto* co = add("conditions", "check the smallness conditions of a tensor", run_conditions);
  co->add_option("--in", o.in)->required();
  co->add_option("--eps", o.eps)->required();
  co->add_option("--K", o.cond_k, "constant in the bounds")->capture_default_str();
  common(co, o, true);

  auto* th = add("threshold", "largest contracting delta on a beta grid", run_threshold);
  th->add_option("--map", o.map, "gauge|type1|type2|full")->capture_default_str();
  th->add_option("--model", o.model, "ising-rotated|ising-unrotated")->capture_default_str();
  th->add_option("--beta-grid", o.beta_sweep, "lo:hi:count, default 0.02:0.4:9");
  th->add_option("--dmax", o.dmax);
  common(th, o, true);

  auto* ef = add("exponent-fit", "log-log slope of two CSV columns", run_exponent_fit);
  ef->add_option("--in", o.in, "CSV file")->required();
  ef->add_option("--x", o.x_col)->capture_default_str();
  ef->add_option("--y", o.y_col)->capture_default_str();
  common(ef, o, true);
  return cmds;
}

void parse(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  app.parse(static_cast<int>(argv.size()), argv.data());
}

/// The value of --config in args[first..], if any.
std::optional<std::string> find_config(const std::vector<std::string>& args, std::size_t first) {
  std::optional<std::string> path;
  for (std::size_t i = first; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  return path;
}

/// Splices `--key=value` tokens from the config file right after the
/// subcommand name, so later command-line flags take precedence. Each entry
/// is parsed alone first so a bad key or value is reported with its line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.size() < 2) return args;
  const auto path = find_config(args, 2);
  if (!path) return args;
  std::vector<std::string> injected;
  for (const ConfigEntry& e : read_config(*path)) {
    const std::string where = *path + ":" + std::to_string(e.line) + ": ";
    const std::string token = "--" + e.key + "=" + e.value;
    Options scratch;
    CLI::App probe;
    auto cmds = build(probe, scratch);
    const auto c = cmds.find(args[1]);
    if (c == cmds.end()) break;  // unknown subcommand; the main parse reports it
    if (!c->second.app->get_option_no_throw("--" + e.key))
      throw Error(ErrorCategory::configuration,
                  where + "unknown key '" + e.key + "' for " + args[1]);
    for (CLI::Option* opt : c->second.app->get_options()) opt->required(false);
    try {
      parse(probe, {args[0], args[1], token});
    } catch (const CLI::ParseError& err) {
      throw Error(ErrorCategory::configuration, where + err.what());
    }
    injected.push_back(token);
  }
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush())
    throw Error(ErrorCategory::invalid_input, "cannot write " + path);
}

int fail(ErrorCategory c, const std::string& msg) {
  ordered_json e{{"error",
                  {{"category", category_name(c)}, {"message", msg}, {"exit_code", exit_code(c)}}}};
  std::cerr << e.dump() << '\n';
  return exit_code(c);
}

int run(const std::vector<std::string>& raw) {
  Options o;
  CLI::App app{"Tensor-network RG experiments", "tnrg"};
  app.set_version_flag("--version", TNRG_VERSION);
  auto cmds = build(app, o);
  try {
    parse(app, expand_config(raw));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCategory::configuration, e.what());
  }

  std::string name;
  for (auto& [n, c] : cmds)
    if (c.app->parsed()) name = n;
  const Command& cmd = cmds.at(name);
  auto given = [&](const char* opt) { return cmd.app->get_option(opt)->count() > 0; };
  if (name == "eig1-demo" && !given("--map")) o.map = "both";
  if (name == "free-energy" && !given("--steps")) o.steps = 20;
  if (name == "cdl-demo" && !given("--steps")) o.steps = 6;
  if (o.max_elements) set_max_elements(*o.max_elements);

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Output out = cmd.run(o);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string csv = out.csv.str();
  if (o.out.empty())
    std::cout << csv << std::flush;
  else
    write_file(o.out, csv);

  const std::string report = !o.json.empty() ? o.json
                             : !o.out.empty() ? o.out + ".json"
                             : !o.save.empty() ? o.save + ".json"
                                               : std::string();
  if (!report.empty()) {
    ordered_json j{{"tool", "tnrg"},
                   {"version", TNRG_VERSION},
                   {"command", name},
                   {"argv", raw},
                   {"config", config_json(o)},
                   {"started", started},
                   {"finished", utc_now()},
                   {"seconds", secs},
                   {"status", out.status},
                   {"results", std::move(out.results)}};
    write_file(report, j.dump(2) + "\n");
  }
  if (out.status != 0)
    return fail(ErrorCategory::failed_check, "oracle comparison failed; see the report");
  return 0;
}

}  // namespace
}  // namespace tnrg::cli

int main(int argc, char** argv) {
  using namespace tnrg;
  try {
    return cli::run(std::vector<std::string>(argv, argv + argc));
  } catch (const Error& e) {
    return cli::fail(e.category(), e.what());
  } catch (const std::bad_alloc&) {
    return cli::fail(ErrorCategory::resource_guard, "out of memory");
  } catch (const std::exception& e) {
    return cli::fail(ErrorCategory::internal, e.what());
  }
}
