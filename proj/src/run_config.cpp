#include "itc/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "itc/benchmarks.hpp"
#include "itc/errors.hpp"

namespace itc::cli {

namespace {

[[nodiscard]] std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': " + why);
}

[[nodiscard]] double parse_number(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) bad_key(key, "trailing characters in number '" + v + "'");
        return x;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_key(key, "cannot parse number '" + v + "'");
    }
}

[[nodiscard]] double parse_number_or_auto(const std::string& key, const std::string& value) {
    if (trim(value) == "auto") return std::numeric_limits<double>::quiet_NaN();
    return parse_number(key, value);
}

[[nodiscard]] std::vector<double> parse_vector(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string v = trim(item);
        if (v.empty()) continue;
        out.push_back(parse_number(key, v));
    }
    if (out.empty()) bad_key(key, "expected at least one number");
    return out;
}

}  // namespace

RunConfig default_config(const std::string& scenario) {
    RunConfig cfg;
    cfg.scenario = scenario;
    if (scenario == "scalar-stab") {
        const auto preset = benchmarks::make_scalar_stab();
        cfg.mode = RunKind::Stabilization;
        cfg.trigger = preset.config;
        cfg.x0 = preset.x0;
        cfg.t_final = 12.0;
        cfg.dt = 1e-4;
    } else if (scenario == "scalar-safety") {
        const auto preset = benchmarks::make_scalar_safety();
        cfg.mode = RunKind::Safety;
        cfg.trigger = preset.config;
        cfg.x0 = preset.x0;
        cfg.t_final = 20.0;
        cfg.dt = 1e-4;
    } else if (scenario == "spacecraft") {
        cfg.mode = RunKind::Stabilization;
        cfg.trigger.sigma = 0.5;
        cfg.trigger.lambda = 0.05;
        cfg.trigger.t_max = 10.0;
        cfg.trigger.kappa = 2.0;
        cfg.trigger.c_min = 0.01;
        cfg.orbit = spacecraft::OrbitParams{1.0, 1.0, 0.0, 0.5};
        cfg.kp = 1.0;
        cfg.kd = 2.0;
        cfg.x0 = State{1.1, 0.0, 0.05, 0.0, 1.0, 0.0};
        cfg.t_final = 100.0;
        cfg.dt = 1e-3;
    } else {
        throw Error(ErrorCode::InvalidArgument,
                    "config key 'scenario': unknown scenario '" + scenario +
                        "' (expected scalar-stab, scalar-safety, or spacecraft)");
    }
    return cfg;
}

void RunConfig::validate() const {
    if (scenario != "scalar-stab" && scenario != "scalar-safety" && scenario != "spacecraft") {
        throw Error(ErrorCode::InvalidArgument, "config key 'scenario': unknown value");
    }
    const std::size_t want_dim = scenario == "spacecraft" ? 6 : 1;
    if (x0.size() != want_dim) {
        throw Error(ErrorCode::InvalidArgument,
                    "config key 'x0': expected " + std::to_string(want_dim) +
                        " component(s), got " + std::to_string(x0.size()));
    }
    if (!(t_final > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "config key 't_final': must be positive");
    }
    if (!(dt > 0.0) || dt >= t_final) {
        throw Error(ErrorCode::InvalidArgument, "config key 'dt': must satisfy 0 < dt < t_final");
    }
    if (!(bisection_tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "config key 'bisection_tol': must be positive");
    }
    try {
        trigger.validate();
    } catch (const Error& e) {
        // Rewrap with config-key phrasing so diagnostics name the key.
        std::string msg = e.what();
        const std::string prefix = "TriggerConfig: ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        const auto sp = msg.find(' ');
        const std::string field = msg.substr(0, sp);
        throw Error(ErrorCode::InvalidArgument,
                    "config key '" + field + "': " +
                        (sp == std::string::npos ? "invalid value" : msg.substr(sp + 1)));
    }
    if (scenario == "spacecraft") {
        if (mode != RunKind::Stabilization) {
            throw Error(ErrorCode::InvalidArgument,
                        "config key 'mode': spacecraft supports stabilization only");
        }
        if (!(orbit.mu > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "config key 'mu': must be positive");
        }
        if (!(orbit.r_des > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "config key 'r_des': must be positive");
        }
        if (!(orbit.r_min > 0.0) || !(orbit.r_min < orbit.r_des)) {
            throw Error(ErrorCode::InvalidArgument,
                        "config key 'r_min': must satisfy 0 < r_min < r_des");
        }
        if (!(kp > 0.0)) throw Error(ErrorCode::InvalidArgument, "config key 'kp': must be positive");
        if (!(kd > 0.0)) throw Error(ErrorCode::InvalidArgument, "config key 'kd': must be positive");
    } else if (scenario == "scalar-stab" && mode != RunKind::Stabilization) {
        throw Error(ErrorCode::InvalidArgument,
                    "config key 'mode': scalar-stab supports stabilization only");
    } else if (scenario == "scalar-safety" && mode != RunKind::Safety) {
        throw Error(ErrorCode::InvalidArgument,
                    "config key 'mode': scalar-safety supports safety only");
    }
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open config file '" + path + "'");
    }

    // First pass: collect (section, key, value) triples so the scenario key
    // can seed defaults before other keys are applied.
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(ErrorCode::InvalidArgument,
                            "config line " + std::to_string(line_no) + ": unterminated section");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "trigger" && section != "orbit" &&
                section != "sweep") {
                throw Error(ErrorCode::InvalidArgument,
                            "config section '[" + section + "]' is not recognized");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument,
                        "config line " + std::to_string(line_no) + ": expected key = value");
        }
        entries.push_back(Entry{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }

    std::string scenario = "scalar-stab";
    for (const Entry& e : entries) {
        if (e.section == "run" && e.key == "scenario") scenario = e.value;
    }
    ParsedConfig parsed;
    parsed.run = default_config(scenario);
    RunConfig& cfg = parsed.run;
    std::string sweep_parameter;
    std::vector<double> sweep_values;

    for (const Entry& e : entries) {
        const std::string& k = e.key;
        const std::string& v = e.value;
        if (e.section == "run") {
            if (k == "scenario") continue;
            if (k == "mode") {
                if (v == "stabilization") {
                    cfg.mode = RunKind::Stabilization;
                } else if (v == "safety") {
                    cfg.mode = RunKind::Safety;
                } else {
                    bad_key(k, "expected 'stabilization' or 'safety'");
                }
            } else if (k == "x0") {
                cfg.x0 = parse_vector(k, v);
            } else if (k == "t_final") {
                cfg.t_final = parse_number(k, v);
            } else if (k == "dt") {
                cfg.dt = parse_number(k, v);
            } else if (k == "bisection_tol") {
                cfg.bisection_tol = parse_number(k, v);
            } else if (k == "out_dir") {
                cfg.out_dir = v;
            } else {
                bad_key(k, "unknown key in section [run]");
            }
        } else if (e.section == "trigger") {
            if (k == "sigma") {
                cfg.trigger.sigma = parse_number(k, v);
            } else if (k == "t_max") {
                cfg.trigger.t_max = parse_number(k, v);
            } else if (k == "lambda") {
                cfg.trigger.lambda = parse_number(k, v);
            } else if (k == "kappa") {
                cfg.trigger.kappa = parse_number(k, v);
            } else if (k == "c_min") {
                cfg.trigger.c_min = parse_number(k, v);
            } else if (k == "theta") {
                cfg.trigger.theta = parse_number(k, v);
            } else if (k == "eps_term") {
                cfg.trigger.eps_term = parse_number_or_auto(k, v);
            } else if (k == "tol_inv") {
                cfg.trigger.tol_inv = parse_number_or_auto(k, v);
            } else {
                bad_key(k, "unknown key in section [trigger]");
            }
        } else if (e.section == "orbit") {
            if (k == "mu") {
                cfg.orbit.mu = parse_number(k, v);
            } else if (k == "r_des") {
                cfg.orbit.r_des = parse_number(k, v);
            } else if (k == "theta0") {
                cfg.orbit.theta0 = parse_number(k, v);
            } else if (k == "r_min") {
                cfg.orbit.r_min = parse_number(k, v);
            } else if (k == "kp") {
                cfg.kp = parse_number(k, v);
            } else if (k == "kd") {
                cfg.kd = parse_number(k, v);
            } else {
                bad_key(k, "unknown key in section [orbit]");
            }
        } else if (e.section == "sweep") {
            if (k == "parameter") {
                sweep_parameter = v;
            } else if (k == "values") {
                sweep_values = parse_vector(k, v);
            } else {
                bad_key(k, "unknown key in section [sweep]");
            }
        } else {
            bad_key(k, "key outside of any recognized section");
        }
    }

    if (!sweep_parameter.empty() || !sweep_values.empty()) {
        if (sweep_parameter.empty()) bad_key("parameter", "sweep block is missing the parameter");
        if (sweep_values.empty()) bad_key("values", "sweep block is missing the value grid");
        parsed.sweep = SweepSpec{sweep_parameter, sweep_values};
        (void)apply_sweep_value(cfg, sweep_parameter, sweep_values.front());  // name check
    }
    cfg.validate();
    return parsed;
}

RunConfig apply_sweep_value(const RunConfig& base, const std::string& parameter, double value) {
    RunConfig cfg = base;
    if (parameter == "sigma") {
        cfg.trigger.sigma = value;
    } else if (parameter == "lambda") {
        cfg.trigger.lambda = value;
    } else if (parameter == "kappa") {
        cfg.trigger.kappa = value;
    } else if (parameter == "c_min") {
        cfg.trigger.c_min = value;
    } else if (parameter == "theta") {
        cfg.trigger.theta = value;
    } else if (parameter == "t_max") {
        cfg.trigger.t_max = value;
    } else if (parameter == "x0") {
        cfg.x0 = State{value};
    } else {
        throw Error(ErrorCode::InvalidArgument,
                    "config key 'parameter': unknown sweep parameter '" + parameter + "'");
    }
    return cfg;
}

ScenarioObjects build_scenario(const RunConfig& config) {
    config.validate();
    ScenarioObjects objects;
    if (config.scenario == "scalar-stab") {
        auto sc = benchmarks::make_scalar_stab();
        objects.field = std::move(sc.field);
        objects.controller = std::move(sc.controller);
        objects.cert = std::move(sc.cert);
    } else if (config.scenario == "scalar-safety") {
        auto sc = benchmarks::make_scalar_safety();
        sc.barrier.theta = config.trigger.theta;
        objects.field = std::move(sc.field);
        objects.controller = std::move(sc.controller);
        objects.barrier = std::move(sc.barrier);
    } else {
        const auto gains = spacecraft::design_gains(config.kp, config.kd, Matrix::identity(6));
        auto sc = spacecraft::make_scenario(gains, config.orbit);
        objects.field = std::move(sc.field);
        objects.controller = std::move(sc.controller);
        objects.cert = std::move(sc.cert);
    }
    return objects;
}

HybridTrajectory run_scenario(const RunConfig& config, HybridTrajectory* partial_sink) {
    ScenarioObjects objects = build_scenario(config);
    if (config.mode == RunKind::Safety) {
        return run_safety(objects.field, objects.controller, *objects.barrier, config.trigger,
                          config.x0, config.t_final, config.dt, config.bisection_tol,
                          partial_sink);
    }
    return run_stabilization(objects.field, objects.controller, *objects.cert, config.trigger,
                             config.x0, config.t_final, config.dt, config.bisection_tol,
                             partial_sink);
}

}  // namespace itc::cli
