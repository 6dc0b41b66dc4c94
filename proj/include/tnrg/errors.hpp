#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnrg {

enum class ErrorCategory {
  invalid_input,
  resource_guard,
  degenerate_normalization,
  configuration,
  numerical,
  failed_check,
  internal,
};

std::string_view category_name(ErrorCategory c) noexcept;
/// Process exit code used by the CLI for each category.
int exit_code(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Largest tensor (in elements) any operation may materialize. Defaults to
/// 1e8; the TNRG_MAX_ELEMENTS environment variable overrides the default.
std::size_t max_elements() noexcept;
void set_max_elements(std::size_t n) noexcept;
/// Throws ErrorCategory::resource_guard when `elements` exceeds the guard.
void check_elements(std::size_t elements, std::string_view what);

}  // namespace tnrg
