#include "tnrg/errors.hpp"

#include <atomic>
#include <cstdlib>

namespace tnrg {

std::string_view category_name(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::invalid_input: return "invalid_input";
    case ErrorCategory::resource_guard: return "resource_guard";
    case ErrorCategory::degenerate_normalization: return "degenerate_normalization";
    case ErrorCategory::configuration: return "configuration";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::failed_check: return "failed_check";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

int exit_code(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::configuration: return 2;
    case ErrorCategory::invalid_input: return 2;
    case ErrorCategory::resource_guard: return 3;
    case ErrorCategory::degenerate_normalization: return 4;
    case ErrorCategory::numerical: return 4;
    case ErrorCategory::failed_check: return 5;
    case ErrorCategory::internal: return 6;
  }
  return 6;
}

namespace {
std::size_t default_guard() {
  if (const char* env = std::getenv("TNRG_MAX_ELEMENTS")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 1.0) return static_cast<std::size_t>(v);
  }
  return 100'000'000;
}
std::atomic<std::size_t>& guard() {
  static std::atomic<std::size_t> g{default_guard()};
  return g;
}
}  // namespace

std::size_t max_elements() noexcept { return guard().load(std::memory_order_relaxed); }
void set_max_elements(std::size_t n) noexcept { guard().store(n); }

void check_elements(std::size_t elements, std::string_view what) {
  if (elements > max_elements())
    throw Error(ErrorCategory::resource_guard,
                std::string(what) + " needs " + std::to_string(elements) +
                    " elements, above the resource guard of " +
                    std::to_string(max_elements()));
}

}  // namespace tnrg
