#include "itc/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <vector>

#include "itc/artifacts.hpp"
#include "itc/errors.hpp"
#include "itc/run_config.hpp"
#include "itc/sweep.hpp"
#include "itc/verify.hpp"

namespace itc::cli {

namespace fs = std::filesystem;

namespace {

void write_run_artifacts(const fs::path& dir, const RunConfig& cfg, const HybridTrajectory& traj,
                         const std::optional<Metrics>& metrics,
                         const std::optional<ErrorMarker>& error) {
    fs::create_directories(dir);
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);
    write_events_jsonl((dir / "events.jsonl").string(), traj);
    write_summary_json((dir / "summary.json").string(), cfg, traj, metrics, error);
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir_override) {
    RunConfig cfg;
    try {
        ParsedConfig parsed = parse_config_file(config_path);
        cfg = parsed.run;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;

    HybridTrajectory partial;
    try {
        const HybridTrajectory traj = run_scenario(cfg, &partial);
        const Metrics metrics = compute_metrics(traj);
        write_run_artifacts(cfg.out_dir, cfg, traj, metrics, std::nullopt);
    } catch (const Error& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        const ErrorMarker marker{to_string(e.code()), e.what(), e.when()};
        write_run_artifacts(cfg.out_dir, cfg, partial, std::nullopt, marker);
        return kExitSimulation;
    }
    return kExitOk;
}

int cmd_verify(const std::string& traj_path, const std::string& events_path,
               const std::string& summary_path) {
    const std::string summary = summary_path.empty()
                                    ? (fs::path(traj_path).parent_path() / "summary.json").string()
                                    : summary_path;
    VerifyReport report;
    try {
        report = verify_files(traj_path, events_path, summary);
    } catch (const Error& e) {
        std::cerr << "verify error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::cout << report.to_json() << "\n";
    return report.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir_override) {
    RunConfig base;
    SweepSpec spec;
    try {
        ParsedConfig parsed = parse_config_file(config_path);
        if (!parsed.sweep) {
            throw Error(ErrorCode::InvalidArgument,
                        "config key 'parameter': sweep command requires a [sweep] block");
        }
        base = parsed.run;
        spec = *parsed.sweep;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (!out_dir_override.empty()) base.out_dir = out_dir_override;

    const fs::path out_dir(base.out_dir);
    fs::create_directories(out_dir);
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size());
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        SweepRow row;
        row.value = spec.values[i];
        char point_name[32];
        std::snprintf(point_name, sizeof point_name, "point_%02zu", i);
        RunConfig cfg = base;
        try {
            cfg = apply_sweep_value(base, spec.parameter, spec.values[i]);
            cfg.out_dir = (out_dir / point_name).string();
            HybridTrajectory partial;
            try {
                const HybridTrajectory traj = run_scenario(cfg, &partial);
                row.metrics = compute_metrics(traj);
                row.ok = true;
                write_run_artifacts(cfg.out_dir, cfg, traj, row.metrics, std::nullopt);
            } catch (const Error& e) {
                const ErrorMarker marker{to_string(e.code()), e.what(), e.when()};
                write_run_artifacts(cfg.out_dir, cfg, partial, std::nullopt, marker);
                throw;
            }
        } catch (const Error& e) {
            row.error = e.what();
            std::cerr << "sweep point " << point_name << " failed: " << e.what() << "\n";
        }
        rows.push_back(std::move(row));
    }
    write_sweep_csv((out_dir / "sweep.csv").string(), spec, rows);
    return kExitOk;
}

}  // namespace itc::cli
