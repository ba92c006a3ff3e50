#include "itc/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace itc::cli {

namespace {

using json = nlohmann::ordered_json;

[[nodiscard]] std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // canonicalize negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

[[noreturn]] void malformed(const std::string& path, const std::string& why) {
    throw Error(ErrorCode::MalformedArtifact, path + ": " + why);
}

[[nodiscard]] std::string mode_label(Mode m) { return m == Mode::On ? "on" : "off"; }

[[nodiscard]] json metrics_to_json(const Metrics& m) {
    return json{
        {"duty_cycle", m.duty_cycle},
        {"min_on_duration", m.min_on_duration},
        {"min_off_duration", m.min_off_duration},
        {"mean_off_duration", m.mean_off_duration},
        {"event_count", m.event_count},
        {"max_constraint_violation", m.max_constraint_violation},
    };
}

}  // namespace

void write_trajectory_csv(const std::string& path, const HybridTrajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) malformed(path, "cannot open for writing");
    const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().x.size();
    const std::size_t m = traj.samples.empty() ? 0 : traj.samples.front().u.size();
    out << "t,mode";
    for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
    for (std::size_t i = 0; i < m; ++i) out << ",u" << i;
    out << ",V_or_h,S\n";
    for (const Sample& s : traj.samples) {
        out << fmt(s.t) << ',' << mode_label(s.mode);
        for (double v : s.x) out << ',' << fmt(v);
        for (double v : s.u) out << ',' << fmt(v);
        out << ',' << fmt(s.cert) << ',' << fmt(s.spec) << '\n';
    }
}

void write_events_jsonl(const std::string& path, const HybridTrajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) malformed(path, "cannot open for writing");
    for (const EventRecord& e : traj.events) {
        json j{
            {"kind", to_string(e.kind)}, {"t", e.time},        {"x", e.state},
            {"cert", e.certificate_value}, {"spec", e.spec_value}, {"c_beta", e.c_beta},
        };
        out << j.dump() << '\n';
    }
}

void write_summary_json(const std::string& path, const RunConfig& config,
                        const HybridTrajectory& traj, const std::optional<Metrics>& metrics,
                        const std::optional<ErrorMarker>& error) {
    std::ofstream out(path, std::ios::binary);
    if (!out) malformed(path, "cannot open for writing");
    json cfg{
        {"scenario", config.scenario},
        {"mode", config.mode == RunKind::Stabilization ? "stabilization" : "safety"},
        {"x0", config.x0},
        {"t_final", config.t_final},
        {"dt", config.dt},
        {"bisection_tol", config.bisection_tol},
        {"sigma", config.trigger.sigma},
        {"t_max", config.trigger.t_max},
        {"lambda", config.trigger.lambda},
        {"kappa", config.trigger.kappa},
        {"c_min", config.trigger.c_min},
        {"theta", config.trigger.theta},
        {"out_dir", config.out_dir},
    };
    if (config.scenario == "spacecraft") {
        cfg["mu"] = config.orbit.mu;
        cfg["r_des"] = config.orbit.r_des;
        cfg["theta0"] = config.orbit.theta0;
        cfg["r_min"] = config.orbit.r_min;
        cfg["kp"] = config.kp;
        cfg["kd"] = config.kd;
    }
    json j{
        {"artifact_version", 1},
        {"config", cfg},
        {"resolved",
         json{{"eps_term", traj.eps_term},
              {"tol_inv", traj.tol_inv},
              {"s0_initial", traj.s0_initial}}},
        {"flags",
         json{{"spec_dipped_during_on", traj.spec_dipped_during_on},
              {"worst_on_dip", traj.worst_on_dip}}},
    };
    // Infinity is not representable in JSON; t_max = inf round-trips as the
    // string "inf".
    if (std::isinf(config.trigger.t_max)) cfg["t_max"] = "inf";
    j["config"] = cfg;
    j["metrics"] = metrics ? metrics_to_json(*metrics) : json(nullptr);
    j["error"] = error ? json{{"code", error->code}, {"message", error->message},
                              {"time", error->time}}
                       : json(nullptr);
    out << j.dump(2) << '\n';
}

HybridTrajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) malformed(path, "missing header row");

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 4 || header[0] != "t" || header[1] != "mode" ||
        header[header.size() - 2] != "V_or_h" || header.back() != "S") {
        malformed(path, "unexpected header layout");
    }
    std::size_t n = 0;
    std::size_t m = 0;
    for (std::size_t i = 2; i + 2 < header.size(); ++i) {
        if (header[i] == "x" + std::to_string(n)) {
            ++n;
        } else if (header[i] == "u" + std::to_string(m)) {
            ++m;
        } else {
            malformed(path, "unexpected column '" + header[i] + "'");
        }
    }

    HybridTrajectory traj;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != header.size()) {
            malformed(path, "row " + std::to_string(row_no) + " has " +
                                std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(header.size()));
        }
        Sample s;
        try {
            s.t = std::stod(cells[0]);
            if (cells[1] == "on") {
                s.mode = Mode::On;
            } else if (cells[1] == "off") {
                s.mode = Mode::Off;
            } else {
                malformed(path, "row " + std::to_string(row_no) + ": bad mode '" + cells[1] + "'");
            }
            for (std::size_t i = 0; i < n; ++i) s.x.push_back(std::stod(cells[2 + i]));
            for (std::size_t i = 0; i < m; ++i) s.u.push_back(std::stod(cells[2 + n + i]));
            s.cert = std::stod(cells[2 + n + m]);
            s.spec = std::stod(cells[3 + n + m]);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            malformed(path, "row " + std::to_string(row_no) + ": unparseable number");
        }
        traj.samples.push_back(std::move(s));
    }
    return traj;
}

void read_events_jsonl(const std::string& path, HybridTrajectory& traj) {
    std::ifstream in(path);
    if (!in) malformed(path, "cannot open");
    std::string line;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            malformed(path, "line " + std::to_string(row_no) + ": " + e.what());
        }
        EventRecord e;
        const std::string kind = j.value("kind", "");
        if (kind == "controller_on") {
            e.kind = EventKind::ControllerOn;
        } else if (kind == "controller_off") {
            e.kind = EventKind::ControllerOff;
        } else if (kind == "tmax_cap") {
            e.kind = EventKind::TmaxCap;
        } else if (kind == "terminated") {
            e.kind = EventKind::Terminated;
        } else {
            malformed(path, "line " + std::to_string(row_no) + ": bad kind '" + kind + "'");
        }
        try {
            e.time = j.at("t").get<double>();
            e.state = j.at("x").get<State>();
            e.certificate_value = j.at("cert").get<double>();
            e.spec_value = j.at("spec").get<double>();
            e.c_beta = j.at("c_beta").get<double>();
        } catch (const std::exception& ex) {
            malformed(path, "line " + std::to_string(row_no) + ": " + ex.what());
        }
        traj.events.push_back(std::move(e));
    }
}

SummaryInfo read_summary_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) malformed(path, "cannot open");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        malformed(path, e.what());
    }
    SummaryInfo info;
    try {
        const json& cfg = j.at("config");
        info.config = default_config(cfg.at("scenario").get<std::string>());
        info.config.mode = cfg.at("mode").get<std::string>() == "safety" ? RunKind::Safety
                                                                        : RunKind::Stabilization;
        info.config.x0 = cfg.at("x0").get<State>();
        info.config.t_final = cfg.at("t_final").get<double>();
        info.config.dt = cfg.at("dt").get<double>();
        info.config.bisection_tol = cfg.at("bisection_tol").get<double>();
        info.config.trigger.sigma = cfg.at("sigma").get<double>();
        if (cfg.at("t_max").is_string()) {
            info.config.trigger.t_max = std::numeric_limits<double>::infinity();
        } else {
            info.config.trigger.t_max = cfg.at("t_max").get<double>();
        }
        info.config.trigger.lambda = cfg.at("lambda").get<double>();
        info.config.trigger.kappa = cfg.at("kappa").get<double>();
        info.config.trigger.c_min = cfg.at("c_min").get<double>();
        info.config.trigger.theta = cfg.at("theta").get<double>();
        if (info.config.scenario == "spacecraft") {
            info.config.orbit.mu = cfg.at("mu").get<double>();
            info.config.orbit.r_des = cfg.at("r_des").get<double>();
            info.config.orbit.theta0 = cfg.at("theta0").get<double>();
            info.config.orbit.r_min = cfg.at("r_min").get<double>();
            info.config.kp = cfg.at("kp").get<double>();
            info.config.kd = cfg.at("kd").get<double>();
        }
        info.eps_term = j.at("resolved").at("eps_term").get<double>();
        info.tol_inv = j.at("resolved").at("tol_inv").get<double>();
        info.s0_initial = j.at("resolved").at("s0_initial").get<double>();
        info.has_error = !j.at("error").is_null();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        malformed(path, e.what());
    }
    return info;
}

}  // namespace itc::cli
