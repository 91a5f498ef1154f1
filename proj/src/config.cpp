#include "motorctl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "motorctl/errors.hpp"

namespace motorctl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError(field, message);
}

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            fail(section.empty() ? item.key() : section + "." + item.key(), "unknown key");
        }
    }
}

const json& require(const json& obj, const std::string& section, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(section.empty() ? key : section + "." + key, "missing required key");
    }
    return *it;
}

double get_number(const json& obj, const std::string& section, const std::string& key) {
    const json& value = require(obj, section, key);
    if (!value.is_number()) {
        fail(section + "." + key, "expected a number");
    }
    return value.get<double>();
}

double get_number_or(const json& obj, const std::string& section, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get_number(obj, section, key);
}

Complex parse_complex(const json& value, const std::string& field) {
    if (value.is_number()) {
        return Complex(value.get<double>(), 0.0);
    }
    if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
        return Complex(value[0].get<double>(), value[1].get<double>());
    }
    fail(field, "expected a number or [re, im] pair");
}

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

Reference parse_reference(const json& obj, ControlKind kind) {
    check_keys(obj, "sim.reference",
               {"omega_r_rad_s", "omega_r_deg_s", "theta_r_rad", "theta_r_deg"});
    const bool speed = kind == ControlKind::speed;
    const char* rad_key = speed ? "omega_r_rad_s" : "theta_r_rad";
    const char* deg_key = speed ? "omega_r_deg_s" : "theta_r_deg";
    const char* wrong = speed ? "theta_r" : "omega_r";
    for (const auto& item : obj.items()) {
        if (item.key().rfind(wrong, 0) == 0) {
            fail("sim.reference." + item.key(), "does not match control_kind");
        }
    }
    const bool has_rad = obj.contains(rad_key);
    const bool has_deg = obj.contains(deg_key);
    if (has_rad == has_deg) {
        fail("sim.reference", std::string("provide exactly one of ") + rad_key + " or " + deg_key);
    }
    const double value = has_rad ? get_number(obj, "sim.reference", rad_key)
                                 : get_number(obj, "sim.reference", deg_key) * kDegToRad;
    return speed ? Reference::speed_step(value) : Reference::position_step(value);
}

MotorParams parse_motor(const json& obj) {
    check_keys(obj, "motor", {"J", "B", "Ra", "La", "Ki", "Kb"});
    MotorParams p{};
    p.J = get_number(obj, "motor", "J");
    p.B = get_number(obj, "motor", "B");
    p.Ra = get_number(obj, "motor", "Ra");
    p.La = get_number(obj, "motor", "La");
    p.Ki = get_number(obj, "motor", "Ki");
    p.Kb = get_number(obj, "motor", "Kb");
    try {
        p.validate();
    } catch (const InputError& e) {
        fail("motor", e.what());
    }
    return p;
}

RetentionPolicy parse_retention(const json& obj) {
    check_keys(obj, "retention", {"mode", "r", "indices"});
    const json& mode = require(obj, "retention", "mode");
    if (mode == "dominant_auto") {
        const double r = get_number_or(obj, "retention", "r", 2.0);
        return RetentionPolicy::dominant(static_cast<int>(r));
    }
    if (mode == "explicit") {
        const json& indices = require(obj, "retention", "indices");
        if (!indices.is_array()) {
            fail("retention.indices", "expected an array of indices");
        }
        std::vector<int> idx;
        for (const auto& v : indices) {
            if (!v.is_number_integer()) {
                fail("retention.indices", "expected integer indices");
            }
            idx.push_back(v.get<int>());
        }
        return RetentionPolicy::explicit_set(std::move(idx));
    }
    fail("retention.mode", "expected \"dominant_auto\" or \"explicit\"");
}

ShiftMap parse_repair(const json& obj) {
    check_keys(obj, "repair", {"shifts"});
    const json& shifts = require(obj, "repair", "shifts");
    if (!shifts.is_array()) {
        fail("repair.shifts", "expected an array");
    }
    ShiftMap map;
    for (size_t i = 0; i < shifts.size(); ++i) {
        const json& entry = shifts[i];
        const std::string section = "repair.shifts[" + std::to_string(i) + "]";
        if (!entry.is_object()) {
            fail(section, "expected an object with from/to");
        }
        check_keys(entry, section, {"from", "to"});
        map.push_back(PoleShift{parse_complex(require(entry, section, "from"), section + ".from"),
                                parse_complex(require(entry, section, "to"), section + ".to")});
    }
    return map;
}

SimConfig parse_sim(const json& obj, ControlKind kind) {
    check_keys(obj, "sim",
               {"dt_s", "horizon_s", "reference", "disturbance", "seed", "initial_state",
                "allow_unstable", "divergence_bound"});
    SimConfig sim;
    sim.dt = get_number_or(obj, "sim", "dt_s", sim.dt);
    sim.horizon = get_number_or(obj, "sim", "horizon_s", sim.horizon);
    sim.reference = parse_reference(require(obj, "sim", "reference"), kind);
    if (obj.contains("disturbance") && !obj["disturbance"].is_null()) {
        const json& dist = obj["disturbance"];
        check_keys(dist, "sim.disturbance", {"mean_Nm", "variance_Nm2", "hold_interval_s"});
        GaussianDisturbance g;
        g.mean = get_number_or(dist, "sim.disturbance", "mean_Nm", 0.0);
        g.variance = get_number(dist, "sim.disturbance", "variance_Nm2");
        g.hold_interval = get_number_or(dist, "sim.disturbance", "hold_interval_s", sim.dt);
        sim.disturbance = g;
    }
    if (obj.contains("seed")) {
        if (!obj["seed"].is_number_integer()) {
            fail("sim.seed", "expected an integer");
        }
        sim.seed = obj["seed"].get<std::uint64_t>();
    }
    if (obj.contains("initial_state")) {
        const json& init = obj["initial_state"];
        if (!init.is_array() || init.size() != 3) {
            fail("sim.initial_state", "expected an array of three numbers");
        }
        for (int i = 0; i < 3; ++i) {
            if (!init[static_cast<size_t>(i)].is_number()) {
                fail("sim.initial_state", "expected an array of three numbers");
            }
            sim.initial_state[static_cast<size_t>(i)] = init[static_cast<size_t>(i)].get<double>();
        }
    }
    if (obj.contains("allow_unstable")) {
        if (!obj["allow_unstable"].is_boolean()) {
            fail("sim.allow_unstable", "expected a boolean");
        }
        sim.allow_unstable = obj["allow_unstable"].get<bool>();
    }
    sim.divergence_bound = get_number_or(obj, "sim", "divergence_bound", sim.divergence_bound);
    try {
        sim.validate();
    } catch (const InputError& e) {
        fail("sim", e.what());
    }
    return sim;
}

MonteCarloConfig parse_monte_carlo(const json& obj) {
    check_keys(obj, "monte_carlo", {"n_runs", "write_run_traces"});
    MonteCarloConfig mc;
    if (obj.contains("n_runs")) {
        if (!obj["n_runs"].is_number_integer() || obj["n_runs"].get<long>() < 1) {
            fail("monte_carlo.n_runs", "expected a positive integer");
        }
        mc.n_runs = obj["n_runs"].get<int>();
    }
    if (obj.contains("write_run_traces")) {
        if (!obj["write_run_traces"].is_boolean()) {
            fail("monte_carlo.write_run_traces", "expected a boolean");
        }
        mc.write_run_traces = obj["write_run_traces"].get<bool>();
    }
    return mc;
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Recover line/column from the byte offset for the diagnostic.
        size_t line = 1, column = 1;
        for (size_t i = 0; i < text.size() && i + 1 < static_cast<size_t>(e.byte); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        fail("line " + std::to_string(line) + ", column " + std::to_string(column),
             "JSON syntax error: " + std::string(e.what()));
    }
    if (!root.is_object()) {
        fail("", "config root must be a JSON object");
    }
    check_keys(root, "",
               {"motor", "control_kind", "weights", "retention", "repair", "sim", "monte_carlo",
                "output_dir"});

    RunConfig cfg;
    cfg.motor = parse_motor(require(root, "", "motor"));

    const json& kind = require(root, "", "control_kind");
    if (kind == "speed") {
        cfg.control_kind = ControlKind::speed;
    } else if (kind == "position") {
        cfg.control_kind = ControlKind::position;
    } else {
        fail("control_kind", "expected \"speed\" or \"position\"");
    }

    if (root.contains("weights")) {
        const json& w = root["weights"];
        check_keys(w, "weights", {"q_scale", "r_scale"});
        cfg.weights.q_scale = get_number_or(w, "weights", "q_scale", 1.0);
        cfg.weights.r_scale = get_number_or(w, "weights", "r_scale", 1.0);
        if (!(cfg.weights.q_scale > 0.0) || !(cfg.weights.r_scale > 0.0)) {
            fail("weights", "q_scale and r_scale must be strictly positive");
        }
    }
    if (root.contains("retention")) {
        cfg.retention = parse_retention(root["retention"]);
    }
    if (root.contains("repair") && !root["repair"].is_null()) {
        cfg.repair = parse_repair(root["repair"]);
    }
    cfg.sim = parse_sim(require(root, "", "sim"), cfg.control_kind);
    if (root.contains("monte_carlo") && !root["monte_carlo"].is_null()) {
        cfg.monte_carlo = parse_monte_carlo(root["monte_carlo"]);
    }
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) {
            fail("output_dir", "expected a string path");
        }
        cfg.output_dir = root["output_dir"].get<std::string>();
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string(), "cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

PlantModel make_model(const RunConfig& cfg) {
    return cfg.control_kind == ControlKind::speed ? speed_model(cfg.motor)
                                                  : position_model(cfg.motor);
}

} // namespace motorctl
