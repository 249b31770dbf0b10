#pragma once

#include <filesystem>
#include <string>

#include "cli/config.hpp"
#include "cli/output.hpp"
#include "funnel/error.hpp"

namespace funnel::cli {

enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kConstructionError = 3,
  kGeometryError = 4,
  kOutOfScope = 10,
};

int exit_code_for(ErrorKind kind);

struct CommandResult {
  int exit_code = kPass;
  ojson report;  // contents of the command's summary file (or error.json)
};

/// Each command writes its artifacts into out (created if needed) and never
/// throws library errors: they become error.json plus the mapped exit code.
CommandResult cmd_omega_eta(const PipelineConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_envelope(const PipelineConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_construct(const PipelineConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_reduce(const PipelineConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out);

/// Dispatch by subcommand name, loading the config from path first.
CommandResult run_command(const std::string& name, const std::filesystem::path& config,
                          const std::filesystem::path& out,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace funnel::cli
