#include "itc/sweep.hpp"

#include <cstdio>
#include <fstream>

#include "itc/errors.hpp"

namespace itc::cli {

std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepSpec& spec) {
    if (spec.values.empty()) {
        throw Error(ErrorCode::InvalidArgument, "config key 'values': sweep grid is empty");
    }
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size());
    for (double value : spec.values) {
        SweepRow row;
        row.value = value;
        try {
            const RunConfig cfg = apply_sweep_value(base, spec.parameter, value);
            const HybridTrajectory traj = run_scenario(cfg);
            row.metrics = compute_metrics(traj);
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const SweepSpec& spec,
                     const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::MalformedArtifact, path + ": cannot open for writing");
    }
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    out << "parameter,value,status,duty_cycle,min_off_duration,mean_off_duration,"
           "min_on_duration,event_count,max_constraint_violation\n";
    for (const SweepRow& row : rows) {
        out << spec.parameter << ',' << fmt(row.value) << ',' << (row.ok ? "ok" : "error");
        if (row.ok) {
            out << ',' << fmt(row.metrics.duty_cycle) << ',' << fmt(row.metrics.min_off_duration)
                << ',' << fmt(row.metrics.mean_off_duration) << ','
                << fmt(row.metrics.min_on_duration) << ',' << row.metrics.event_count << ','
                << fmt(row.metrics.max_constraint_violation);
        } else {
            out << ",,,,,,";
        }
        out << '\n';
    }
}

}  // namespace itc::cli
