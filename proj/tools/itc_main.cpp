#include <string>

#include <CLI11.hpp>

#include "itc/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered intermittent control simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string traj_path;
    std::string events_path;
    std::string summary_path;

    CLI::App* run = app.add_subcommand("run", "Simulate a configured scenario");
    run->add_option("--config", config_path, "Config file path")->required();
    run->add_option("--out-dir", out_dir, "Override the config's out_dir");

    CLI::App* verify = app.add_subcommand("verify", "Replay invariant checks on run artifacts");
    verify->add_option("--traj", traj_path, "trajectory.csv path")->required();
    verify->add_option("--events", events_path, "events.jsonl path")->required();
    verify->add_option("--summary", summary_path,
                       "summary.json path (default: next to the trajectory)");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("--config", config_path, "Config file with a [sweep] block")->required();
    sweep->add_option("--out-dir", out_dir, "Override the config's out_dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : itc::cli::kExitConfig;
    }

    if (run->parsed()) return itc::cli::cmd_run(config_path, out_dir);
    if (verify->parsed()) return itc::cli::cmd_verify(traj_path, events_path, summary_path);
    return itc::cli::cmd_sweep(config_path, out_dir);
}
