#pragma once

#include <string>

namespace itc::cli {

/// Exit codes shared by the CLI commands: 0 success, 1 failed verification,
/// 2 config/artifact errors, 3 simulation errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSimulation = 3;

/// Run a configured scenario and write trajectory.csv, events.jsonl, and
/// summary.json into the out dir (config's out_dir unless overridden).
/// Simulation failures flush partial outputs and an error marker.
int cmd_run(const std::string& config_path, const std::string& out_dir_override = "");

/// Replay the invariant checks on produced artifacts; prints the JSON report.
/// summary_path defaults to summary.json next to the trajectory file.
int cmd_verify(const std::string& traj_path, const std::string& events_path,
               const std::string& summary_path = "");

/// One run per sweep grid point; writes sweep.csv plus per-point artifact
/// directories under the out dir.
int cmd_sweep(const std::string& config_path, const std::string& out_dir_override = "");

}  // namespace itc::cli
