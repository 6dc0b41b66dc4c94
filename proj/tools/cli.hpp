#pragma once
// Shared pieces of the tnrg command-line tool.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tnrg/tensor.hpp"

namespace tnrg::cli {

using nlohmann::ordered_json;

/// Every option of every subcommand. A subcommand binds only the fields it
/// uses; the rest keep their defaults.
struct Options {
  std::string model = "ising-unrotated";
  std::string rep = "unrotated";  // ising-tensor spelling of the model
  std::string map = "full";
  std::string algo = "trg";
  std::optional<double> beta;
  std::string beta_sweep;
  std::optional<double> eps;
  std::string eps_sweep;
  std::size_t steps = 1;
  std::optional<std::size_t> dmax;
  std::uint64_t seed = 1;
  std::string dims = "2,2,2,2";
  std::size_t k = 2;
  std::optional<std::size_t> l;
  std::optional<std::size_t> lx, ly;
  std::string in;
  std::string save;
  std::string out;
  std::string json;
  std::string x_col = "eps_before";
  std::string y_col = "eps_after";
  double cond_k = 10.0;
  std::size_t jobs = 0;  // 0: one per hardware thread
  std::optional<std::size_t> max_elements;
  std::string config;
};

/// lo:hi:count, log spaced; both ends included.
struct Sweep {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
  std::vector<double> points() const;
};
/// Errors name the option and the character position of the bad field.
Sweep parse_sweep(const std::string& spec, const std::string& option, std::size_t min_count);

/// One parsed line of a key=value config file.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};
/// Grammar: one `key = value` per line; blank lines and lines starting with
/// '#' are ignored; whitespace around key and value is trimmed. Keys are the
/// long option names without the leading dashes.
std::vector<ConfigEntry> read_config(const std::filesystem::path& path);

/// Plain CSV with a header row. Numbers use the shortest round-trip form.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  Csv& row();
  Csv& cell(double x);
  Csv& cell(std::size_t x);
  Csv& cell(bool x);
  Csv& cell(const std::string& x);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Output {
  Csv csv{{}};
  ordered_json results = ordered_json::object();
  /// Nonzero when an oracle comparison failed; artifacts are still written.
  int status = 0;
};

/// Runs f(0..n-1) on at most `jobs` threads; results stay in index order.
/// The first failure by index is rethrown after all workers finish.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, std::size_t jobs, F f) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Input tensor for a model at one sweep parameter (beta for the Ising
/// models, eps for eig1 and random; ignored by cdl and file).
Tensor build_model(const Options& o, double param);
/// "beta" or "eps" for models with a sweep parameter, empty otherwise.
std::string sweep_parameter(const std::string& model);
/// Points from --beta/--beta-sweep or --eps/--eps-sweep, whichever applies.
std::vector<double> sweep_points(const Options& o, std::size_t min_count);

Output run_ising_tensor(const Options& o);
Output run_rg(const Options& o);
Output run_torus_z(const Options& o);
Output run_free_energy(const Options& o);
Output run_cdl_demo(const Options& o);
Output run_eig1_demo(const Options& o);
Output run_conditions(const Options& o);
Output run_threshold(const Options& o);
Output run_exponent_fit(const Options& o);

}  // namespace tnrg::cli
