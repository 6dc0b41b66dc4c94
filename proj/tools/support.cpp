#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "tnrg/diagnostics.hpp"
#include "tnrg/errors.hpp"
#include "tnrg/rg_truncated.hpp"
#include "tnrg/tensor_io.hpp"

namespace tnrg::cli {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCategory::configuration, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double_field(const std::string& field, const std::string& option, std::size_t pos) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto [p, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || p != end || !std::isfinite(v))
    bad(option + ": expected a number at position " + std::to_string(pos + 1) + ", got '" + field + "'");
  return v;
}

std::array<std::size_t, 4> parse_dims(const std::string& s) {
  std::array<std::size_t, 4> d{};
  std::size_t n = 0, pos = 0;
  std::stringstream ss(s);
  std::string field;
  while (std::getline(ss, field, ',')) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (n >= 4 || ec != std::errc() || p != field.data() + field.size() || v == 0)
      bad("dims: expected four positive integers 'r,t,l,b'; bad field at position " +
          std::to_string(pos + 1));
    d[n++] = v;
    pos += field.size() + 1;
  }
  if (n != 4) bad("dims: expected four positive integers 'r,t,l,b'");
  return d;
}

}  // namespace

std::vector<double> Sweep::points() const { return log_grid(lo, hi, count); }

Sweep parse_sweep(const std::string& spec, const std::string& option, std::size_t min_count) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    bad(option + ": expected lo:hi:count, got '" + spec + "'");
  Sweep s;
  s.lo = parse_double_field(spec.substr(0, c1), option, 0);
  s.hi = parse_double_field(spec.substr(c1 + 1, c2 - c1 - 1), option, c1 + 1);
  const std::string cnt = spec.substr(c2 + 1);
  const auto [p, ec] = std::from_chars(cnt.data(), cnt.data() + cnt.size(), s.count);
  if (cnt.empty() || ec != std::errc() || p != cnt.data() + cnt.size())
    bad(option + ": expected an integer count at position " + std::to_string(c2 + 2) + ", got '" +
        cnt + "'");
  if (!(s.lo > 0.0)) bad(option + ": lo must be > 0 (points are log spaced)");
  if (!(s.hi > s.lo)) bad(option + ": need lo < hi");
  if (s.count < min_count)
    bad(option + ": need at least " + std::to_string(min_count) + " points");
  return s;
}

std::vector<ConfigEntry> read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::invalid_input, "cannot open config file " + path.string());
  std::vector<ConfigEntry> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = path.string() + ":" + std::to_string(n) + ": ";
    if (eq == std::string::npos) bad(where + "expected key = value");
    ConfigEntry e{trim(t.substr(0, eq)), trim(t.substr(eq + 1)), n};
    if (e.key.empty()) bad(where + "empty key");
    if (e.key.rfind("-", 0) == 0) bad(where + "keys are written without leading dashes");
    if (e.key == "config") bad(where + "config files cannot include other config files");
    out.push_back(std::move(e));
  }
  return out;
}

Csv& Csv::row() {
  rows_.emplace_back();
  return *this;
}
Csv& Csv::cell(double x) { return cell(shortest(x)); }
Csv& Csv::cell(std::size_t x) { return cell(std::to_string(x)); }
Csv& Csv::cell(bool x) { return cell(std::string(x ? "true" : "false")); }
Csv& Csv::cell(const std::string& x) {
  rows_.back().push_back(x);
  return *this;
}

std::string Csv::str() const {
  std::string s;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    s += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return s;
}

std::string sweep_parameter(const std::string& model) {
  if (model == "ising-rotated" || model == "ising-unrotated") return "beta";
  if (model == "eig1" || model == "random") return "eps";
  if (model == "cdl" || model == "file") return {};
  bad("unknown model '" + model + "' (ising-rotated|ising-unrotated|file|cdl|eig1|random)");
}

std::vector<double> sweep_points(const Options& o, std::size_t min_count) {
  const std::string p = sweep_parameter(o.model);
  const bool is_beta = p == "beta";
  const std::optional<double>& single = is_beta ? o.beta : o.eps;
  const std::string& spec = is_beta ? o.beta_sweep : o.eps_sweep;
  if (p.empty()) {
    if (o.beta || o.eps || !o.beta_sweep.empty() || !o.eps_sweep.empty())
      bad("model " + o.model + " takes no beta or eps");
    return {0.0};
  }
  const std::string other_single = is_beta ? "eps" : "beta";
  if ((is_beta ? o.eps : o.beta) || !(is_beta ? o.eps_sweep : o.beta_sweep).empty())
    bad("model " + o.model + " is parametrized by " + p + ", not " + other_single);
  if (single && !spec.empty()) bad("give either --" + p + " or --" + p + "-sweep, not both");
  if (!spec.empty()) return parse_sweep(spec, p + "-sweep", min_count).points();
  if (!single) bad("model " + o.model + " needs --" + p + " or --" + p + "-sweep");
  if (min_count > 1) bad("this command needs --" + p + "-sweep with at least " +
                         std::to_string(min_count) + " points");
  return {*single};
}

Tensor build_model(const Options& o, double param) {
  if (o.model == "ising-rotated") return make_model(Model::ising_rotated, param);
  if (o.model == "ising-unrotated") return make_model(Model::ising_unrotated, param);
  if (o.model == "eig1") return eig1_perturbation(param);
  if (o.model == "random") return random_perturbation(param, o.seed, parse_dims(o.dims));
  if (o.model == "cdl") return cdl(random_cdl_spec(o.k, o.seed));
  if (o.model == "file") {
    if (o.in.empty()) bad("model file needs --in");
    return load_tensor(o.in);
  }
  sweep_parameter(o.model);  // throws for unknown names
  return {};
}

}  // namespace tnrg::cli
