#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fluxqpt {

/// Machine-readable failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  config,
  dimension,
  memory_budget,
  convergence,
  degenerate,
  accuracy,
  io,
};

std::string_view to_string(ErrorCategory category) noexcept;
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

inline std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::dimension: return "dimension";
    case ErrorCategory::memory_budget: return "memory_budget";
    case ErrorCategory::convergence: return "convergence";
    case ErrorCategory::degenerate: return "degenerate";
    case ErrorCategory::accuracy: return "accuracy";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

inline int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::dimension: return 3;
    case ErrorCategory::memory_budget: return 4;
    case ErrorCategory::convergence: return 5;
    case ErrorCategory::degenerate: return 6;
    case ErrorCategory::accuracy: return 7;
    case ErrorCategory::io: return 8;
  }
  return 1;
}

}  // namespace fluxqpt
