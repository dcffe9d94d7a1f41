#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nctorus/io.hpp"

namespace nctorus::cli {

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kConfigError = 2 };

struct CommandOptions {
  std::string out_dir;  // empty: do not write files
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

struct CommandResult {
  int exit_code = kSuccess;
  json report;
};

// Each command takes the parsed config document. ConfigError and JSON errors
// become exit code 2; NumericalError and TruncationOverflow become exit code 1.
CommandResult cmd_validate(const json& config, const CommandOptions& opts);
CommandResult cmd_ym(const json& config, const CommandOptions& opts);
CommandResult cmd_make_projection(const json& config, const CommandOptions& opts);
CommandResult cmd_optimize(const json& config, const CommandOptions& opts);

// Dispatches by name ("validate", "ym", "make-projection", "optimize").
CommandResult run_command(const std::string& name, const json& config, const CommandOptions& opts);

}  // namespace nctorus::cli
