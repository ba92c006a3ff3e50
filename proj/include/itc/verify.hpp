#pragma once

#include <string>
#include <vector>

#include "itc/run_config.hpp"
#include "itc/sim_engine.hpp"

namespace itc::cli {

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst_margin = 0.0;  // signed; negative means slack was consumed
    double worst_time = 0.0;    // sample time of the worst margin
    std::string detail;
};

struct VerifyReport {
    bool pass = true;
    std::vector<CheckResult> checks;

    [[nodiscard]] std::string to_json() const;
};

/// Replay the invariant checks offline on a produced run: recomputes V (or h)
/// and S along the logged samples and verifies the forward-invariance
/// envelope, the per-interval exponential bound, the on-phase decrease (or
/// the barrier-rate inequalities in safety mode), event alternation, and the
/// no-Zeno minimum phase duration.
[[nodiscard]] VerifyReport verify_run(const HybridTrajectory& traj, const RunConfig& config,
                                      double tol_inv);

/// File-based entry point: loads trajectory.csv + events.jsonl, and the
/// sibling summary.json for the resolved config. Throws
/// Error(MalformedArtifact) on unreadable inputs.
[[nodiscard]] VerifyReport verify_files(const std::string& traj_csv,
                                        const std::string& events_jsonl,
                                        const std::string& summary_json);

}  // namespace itc::cli
