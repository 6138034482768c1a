// Copyright 2026 The cqedsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cqed/config.hpp"

#include <set>
#include <stdexcept>

namespace cqed::cli {

using nlohmann::json;

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::PhaseShift: return "phase-shift";
        case Scenario::SetMixer: return "set-mixer";
        case Scenario::Lindblad: return "lindblad";
        case Scenario::Trajectory: return "trajectory";
        case Scenario::FeedbackEnsemble: return "feedback-ensemble";
    }
    throw std::logic_error("unreachable scenario");
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "phase-shift") return Scenario::PhaseShift;
    if (name == "set-mixer") return Scenario::SetMixer;
    if (name == "lindblad") return Scenario::Lindblad;
    if (name == "trajectory") return Scenario::Trajectory;
    if (name == "feedback-ensemble") return Scenario::FeedbackEnsemble;
    throw std::invalid_argument("scenario: unknown value '" + name + "'");
}

namespace {

void reject_unknown_keys(const json& section, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!section.is_object()) {
        throw std::invalid_argument(where + ": expected an object");
    }
    for (const auto& item : section.items()) {
        if (!allowed.contains(item.key())) {
            throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
void read_field(const json& section, const char* key, T& target, const std::string& where) {
    if (!section.contains(key)) {
        return;
    }
    try {
        target = section.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(where + "." + key + ": wrong type");
    }
}

void require_positive(double value, const std::string& field) {
    if (!(value > 0.0)) {
        throw std::invalid_argument(field + ": must be > 0");
    }
}

} // namespace

ExperimentConfig ExperimentConfig::defaults_for(Scenario scenario) {
    ExperimentConfig cfg;
    cfg.scenario = scenario;
    // Reference operating point: epsilon = kappa >> chi, dt = 1e-4, T = 2000 dt,
    // gamma = 0.003, P = 3, lambda = 100, alpha = 3.
    cfg.system.epsilon = 100.0;
    cfg.system.chi = 25.0;
    cfg.system.kappa = 100.0;
    cfg.sde.dt = 1e-4;
    cfg.sde.t_final = 10.0;
    cfg.sde.fock_dim = 15;
    cfg.sde.sample_every = 100;
    cfg.device = set_mixer::make_device(0.0, 1.0, 1.0, set_mixer::OperatingPoint::Extremum);
    cfg.signal_tone = {0.01, 0.006, 2.0 * 3.14159265358979323846 * 5.0, 0.0};
    cfg.lo_tone = {0.008, -0.005, 2.0 * 3.14159265358979323846 * 4.0, 0.7};
    if (scenario == Scenario::Lindblad) {
        cfg.sde.t_final = 1.0;
        cfg.sde.fock_dim = 10;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    reject_unknown_keys(doc,
                        {"scenario", "system", "sde", "feedback", "set_device", "signal_tone",
                         "lo_tone", "initial", "probe", "n_traj", "master_seed",
                         "dump_trajectories", "out", "svg"},
                        "config");
    if (!doc.contains("scenario")) {
        throw std::invalid_argument("config: missing scenario");
    }
    ExperimentConfig cfg = defaults_for(scenario_from_string(doc.at("scenario").get<std::string>()));

    if (doc.contains("system")) {
        const json& s = doc.at("system");
        reject_unknown_keys(s, {"omega_r", "omega_a", "g", "delta", "chi", "kappa", "epsilon"},
                            "system");
        read_field(s, "omega_r", cfg.system.omega_r, "system");
        read_field(s, "omega_a", cfg.system.omega_a, "system");
        read_field(s, "g", cfg.system.g, "system");
        read_field(s, "delta", cfg.system.delta, "system");
        read_field(s, "chi", cfg.system.chi, "system");
        read_field(s, "kappa", cfg.system.kappa, "system");
        read_field(s, "epsilon", cfg.system.epsilon, "system");
    }
    if (doc.contains("sde")) {
        const json& s = doc.at("sde");
        reject_unknown_keys(s, {"dt", "t_final", "fock_dim", "sample_every"}, "sde");
        read_field(s, "dt", cfg.sde.dt, "sde");
        read_field(s, "t_final", cfg.sde.t_final, "sde");
        read_field(s, "fock_dim", cfg.sde.fock_dim, "sde");
        read_field(s, "sample_every", cfg.sde.sample_every, "sde");
    }
    if (doc.contains("feedback")) {
        const json& s = doc.at("feedback");
        reject_unknown_keys(s, {"lambda", "power", "window", "gamma", "normalization", "clamp"},
                            "feedback");
        read_field(s, "lambda", cfg.fb.lambda, "feedback");
        read_field(s, "power", cfg.fb.power, "feedback");
        read_field(s, "window", cfg.fb.window, "feedback");
        read_field(s, "gamma", cfg.fb.gamma, "feedback");
        read_field(s, "normalization", cfg.fb.normalization, "feedback");
        read_field(s, "clamp", cfg.fb.clamp, "feedback");
    }
    if (doc.contains("set_device")) {
        const json& s = doc.at("set_device");
        reject_unknown_keys(
            s, {"baseline_current", "modulation_depth", "gate_coupling", "v_dc_hint",
                "operating_point"},
            "set_device");
        double i0 = cfg.device.baseline_current;
        double depth = cfg.device.modulation_depth;
        double cg = cfg.device.gate_coupling;
        double hint = cfg.device.dc_bias;
        std::string point = cfg.device.operating_point == set_mixer::OperatingPoint::Extremum
                                ? "A"
                                : "B";
        read_field(s, "baseline_current", i0, "set_device");
        read_field(s, "modulation_depth", depth, "set_device");
        read_field(s, "gate_coupling", cg, "set_device");
        read_field(s, "v_dc_hint", hint, "set_device");
        read_field(s, "operating_point", point, "set_device");
        set_mixer::OperatingPoint op;
        if (point == "A") {
            op = set_mixer::OperatingPoint::Extremum;
        } else if (point == "B") {
            op = set_mixer::OperatingPoint::MaxSlope;
        } else {
            throw std::invalid_argument("set_device.operating_point: must be 'A' or 'B'");
        }
        cfg.device = set_mixer::make_device(i0, depth, cg, op, hint);
    }
    auto read_tone = [&](const char* key, set_mixer::VoltageTone& tone) {
        if (!doc.contains(key)) {
            return;
        }
        const json& s = doc.at(key);
        reject_unknown_keys(s, {"x", "y", "omega", "phi"}, key);
        read_field(s, "x", tone.x, key);
        read_field(s, "y", tone.y, key);
        read_field(s, "omega", tone.omega, key);
        read_field(s, "phi", tone.phi, key);
    };
    read_tone("signal_tone", cfg.signal_tone);
    read_tone("lo_tone", cfg.lo_tone);
    if (doc.contains("initial")) {
        const json& s = doc.at("initial");
        reject_unknown_keys(s, {"kind", "alpha"}, "initial");
        read_field(s, "kind", cfg.initial.kind, "initial");
        read_field(s, "alpha", cfg.initial.alpha, "initial");
    }
    if (doc.contains("probe")) {
        const json& s = doc.at("probe");
        reject_unknown_keys(s, {"span_kappas", "points"}, "probe");
        read_field(s, "span_kappas", cfg.probe.span_kappas, "probe");
        read_field(s, "points", cfg.probe.points, "probe");
    }
    read_field(doc, "n_traj", cfg.n_traj, "config");
    read_field(doc, "master_seed", cfg.master_seed, "config");
    read_field(doc, "dump_trajectories", cfg.dump_trajectories, "config");
    read_field(doc, "out", cfg.out_dir, "config");
    read_field(doc, "svg", cfg.svg, "config");

    cfg.validate();
    return cfg;
}

json ExperimentConfig::to_json() const {
    json doc;
    doc["scenario"] = to_string(scenario);
    doc["system"] = {{"omega_r", system.omega_r}, {"omega_a", system.omega_a},
                     {"g", system.g},             {"delta", system.delta},
                     {"chi", system.chi},         {"kappa", system.kappa},
                     {"epsilon", system.epsilon}};
    doc["sde"] = {{"dt", sde.dt},
                  {"t_final", sde.t_final},
                  {"fock_dim", sde.fock_dim},
                  {"sample_every", sde.sample_every}};
    doc["feedback"] = {{"lambda", fb.lambda},   {"power", fb.power},
                       {"window", fb.window},   {"gamma", fb.gamma},
                       {"normalization", fb.normalization}, {"clamp", fb.clamp}};
    doc["set_device"] = {
        {"baseline_current", device.baseline_current},
        {"modulation_depth", device.modulation_depth},
        {"gate_coupling", device.gate_coupling},
        {"v_dc_hint", device.dc_bias},
        {"operating_point", device.operating_point == set_mixer::OperatingPoint::Extremum ? "A"
                                                                                          : "B"}};
    doc["signal_tone"] = {{"x", signal_tone.x},
                          {"y", signal_tone.y},
                          {"omega", signal_tone.omega},
                          {"phi", signal_tone.phi}};
    doc["lo_tone"] = {
        {"x", lo_tone.x}, {"y", lo_tone.y}, {"omega", lo_tone.omega}, {"phi", lo_tone.phi}};
    doc["initial"] = {{"kind", initial.kind}, {"alpha", initial.alpha}};
    doc["probe"] = {{"span_kappas", probe.span_kappas}, {"points", probe.points}};
    doc["n_traj"] = n_traj;
    doc["master_seed"] = master_seed;
    doc["dump_trajectories"] = dump_trajectories;
    doc["out"] = out_dir;
    doc["svg"] = svg;
    return doc;
}

void ExperimentConfig::validate() {
    system.validate_and_resolve();
    if (sde.dt <= 0.0) {
        throw std::invalid_argument("sde.dt: must be > 0");
    }
    if (sde.t_final <= 0.0) {
        throw std::invalid_argument("sde.t_final: must be > 0");
    }
    if (sde.fock_dim < 2) {
        throw std::invalid_argument("sde.fock_dim: must be >= 2");
    }
    if (sde.sample_every < 1) {
        throw std::invalid_argument("sde.sample_every: must be >= 1");
    }
    sde.validate();
    fb.validate();
    if (fb.normalization < 0.0) {
        throw std::invalid_argument("feedback.normalization: must be >= 0 (0 = auto)");
    }
    if (n_traj < 1) {
        throw std::invalid_argument("n_traj: must be >= 1");
    }
    if (dump_trajectories < 0 || dump_trajectories > n_traj) {
        throw std::invalid_argument("dump_trajectories: must lie in [0, n_traj]");
    }
    if (initial.kind != "x-polarized" && initial.kind != "phi-plus") {
        throw std::invalid_argument("initial.kind: must be 'x-polarized' or 'phi-plus'");
    }
    if (probe.points < 2) {
        throw std::invalid_argument("probe.points: must be >= 2");
    }
    require_positive(probe.span_kappas, "probe.span_kappas");
    if (scenario == Scenario::SetMixer) {
        require_positive(signal_tone.omega, "signal_tone.omega");
        require_positive(lo_tone.omega, "lo_tone.omega");
    }
}

hilbert::StateVector ExperimentConfig::initial_state() const {
    if (initial.kind == "phi-plus") {
        return stochastic::phi_plus_with_coherent(initial.alpha, sde.fock_dim);
    }
    return stochastic::x_polarized_with_coherent(initial.alpha, sde.fock_dim);
}

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    return ExperimentConfig::from_json(doc);
}

ExperimentConfig preset(const std::string& name) {
    if (name == "paper-fig5" || name == "paper-fig6") {
        ExperimentConfig cfg = ExperimentConfig::defaults_for(Scenario::FeedbackEnsemble);
        cfg.sde.fock_dim = 25;
        cfg.n_traj = 300;
        cfg.svg = true;
        return cfg;
    }
    if (name == "desk-scale") {
        ExperimentConfig cfg = ExperimentConfig::defaults_for(Scenario::FeedbackEnsemble);
        cfg.sde.fock_dim = 15;
        cfg.n_traj = 100;
        cfg.svg = true;
        return cfg;
    }
    throw std::invalid_argument("preset: unknown name '" + name + "'");
}

std::vector<std::string> preset_names() { return {"paper-fig5", "paper-fig6", "desk-scale"}; }

} // namespace cqed::cli
