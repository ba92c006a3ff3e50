#pragma once

#include <string>
#include <vector>

#include "itc/run_config.hpp"
#include "itc/sim_engine.hpp"

namespace itc::cli {

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    Metrics metrics;
    std::string error;
};

/// One run per grid value of the swept parameter. Failed points record the
/// error and the sweep continues.
[[nodiscard]] std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepSpec& spec);

/// Aggregated table: parameter,value,status,duty_cycle,min_off_duration,
/// mean_off_duration,min_on_duration,event_count,max_constraint_violation.
void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows);

}  // namespace itc::cli
