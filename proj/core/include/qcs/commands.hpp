#pragma once

#include "qcs/run_config.hpp"

#include <iosfwd>
#include <string>

namespace qcs {

enum class ExitCode : int { ok = 0, invalid_config = 1, convergence_failure = 2, internal_error = 3 };

/// Each command validates the config, computes, and writes its CSV and
/// manifest.json into cfg.output_dir.  Progress lines go to `log`.
ExitCode cmd_solve(const RunConfig &cfg, std::ostream &log);
ExitCode cmd_quasistatic(const RunConfig &cfg, std::ostream &log);
ExitCode cmd_sweep(const RunConfig &cfg, std::ostream &log);
ExitCode cmd_control(const RunConfig &cfg, std::ostream &log);

/// Dispatch on cfg.command and map exceptions to exit codes; never throws.
ExitCode run_command(const RunConfig &cfg, std::ostream &log);

} // namespace qcs
