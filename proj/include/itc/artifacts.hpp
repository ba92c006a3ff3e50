#pragma once

#include <optional>
#include <string>

#include "itc/errors.hpp"
#include "itc/run_config.hpp"
#include "itc/sim_engine.hpp"

namespace itc::cli {

/// trajectory.csv: header t,mode,x0..,u0..,V_or_h,S; numbers with 12
/// significant digits; byte-deterministic for identical runs.
void write_trajectory_csv(const std::string& path, const HybridTrajectory& traj);

/// events.jsonl: one object per line with keys {kind, t, x, cert, spec,
/// c_beta}.
void write_events_jsonl(const std::string& path, const HybridTrajectory& traj);

struct ErrorMarker {
    std::string code;
    std::string message;
    double time = 0.0;
};

/// summary.json: metrics, the fully resolved config (self-describing
/// artifact), resolved tolerances, flags, and an error marker when the run
/// failed partway.
void write_summary_json(const std::string& path, const RunConfig& config,
                        const HybridTrajectory& traj, const std::optional<Metrics>& metrics,
                        const std::optional<ErrorMarker>& error);

/// Readers for the verify command. Throw Error(MalformedArtifact) on
/// unparseable files. The trajectory reader restores samples; the events
/// reader restores event records; the summary reader restores the resolved
/// config and tolerances.
[[nodiscard]] HybridTrajectory read_trajectory_csv(const std::string& path);
void read_events_jsonl(const std::string& path, HybridTrajectory& traj);

struct SummaryInfo {
    RunConfig config;
    double eps_term = 0.0;
    double tol_inv = 0.0;
    double s0_initial = 0.0;
    bool has_error = false;
};

[[nodiscard]] SummaryInfo read_summary_json(const std::string& path);

}  // namespace itc::cli
