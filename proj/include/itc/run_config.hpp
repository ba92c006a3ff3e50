#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itc/sim_engine.hpp"
#include "itc/spacecraft.hpp"
#include "itc/triggers.hpp"
#include "itc/types.hpp"

namespace itc::cli {

/// Fully resolved run description: scenario preset defaults overlaid with
/// the config file's key-value pairs. Every field is validated before a
/// simulation starts; invalid values raise Error(InvalidArgument) naming
/// the offending key.
struct RunConfig {
    std::string scenario = "scalar-stab";  // scalar-stab | scalar-safety | spacecraft
    RunKind mode = RunKind::Stabilization;
    State x0;
    double t_final = 12.0;
    double dt = 1e-4;
    double bisection_tol = 1e-10;
    TriggerConfig trigger;
    spacecraft::OrbitParams orbit;
    double kp = 1.0;
    double kd = 2.0;
    std::string out_dir = "out";

    void validate() const;
};

struct SweepSpec {
    std::string parameter;       // one of sigma, lambda, kappa, c_min, theta, t_max, x0
    std::vector<double> values;  // non-empty grid
};

struct ParsedConfig {
    RunConfig run;
    std::optional<SweepSpec> sweep;
};

/// Preset defaults for a named scenario.
[[nodiscard]] RunConfig default_config(const std::string& scenario);

/// Parse the sectioned key = value config format. Unknown sections or keys,
/// unreadable files, and malformed values raise Error(InvalidArgument) with
/// the key named in the message.
[[nodiscard]] ParsedConfig parse_config_file(const std::string& path);

/// Apply a sweep parameter override to a copy of the base config.
[[nodiscard]] RunConfig apply_sweep_value(const RunConfig& base, const std::string& parameter,
                                          double value);

/// The closed-loop ingredients a configured scenario provides: the vector
/// field, the feedback law, and the certificate matching the run mode.
struct ScenarioObjects {
    ControlledField field;
    Controller controller;
    std::optional<IssCertificate> cert;        // stabilization runs
    std::optional<BarrierCertificate> barrier; // safety runs
};

[[nodiscard]] ScenarioObjects build_scenario(const RunConfig& config);

/// Build the configured scenario and run it. On a simulation error the
/// partial trajectory is moved into *partial_sink when given, and the error
/// is rethrown.
[[nodiscard]] HybridTrajectory run_scenario(const RunConfig& config,
                                            HybridTrajectory* partial_sink = nullptr);

}  // namespace itc::cli
