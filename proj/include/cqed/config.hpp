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

#ifndef CQED_CONFIG_HPP
#define CQED_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/feedback.hpp"
#include "cqed/set_mixer.hpp"

namespace cqed::cli {

enum class Scenario { PhaseShift, SetMixer, Lindblad, Trajectory, FeedbackEnsemble };

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& name);

/// Initial system state for trajectory scenarios: the x-polarized qubit
/// product or the target |phi+>, each joined with a coherent field.
struct InitialState {
    std::string kind = "x-polarized"; // or "phi-plus"
    double alpha = 3.0;               // real coherent amplitude
};

/// Probe sweep for the phase-shift scenario, in units of kappa around omega_r.
struct ProbeSweep {
    double span_kappas = 5.0;
    int points = 201;
};

/// A fully resolved experiment description. JSON documents parse into this
/// with unknown keys rejected and every invariant checked; the manifest
/// echoes it back so a run can be reproduced from its outputs alone.
struct ExperimentConfig {
    Scenario scenario = Scenario::FeedbackEnsemble;
    models::SystemParams system;          // reference rates by default
    stochastic::SdeConfig sde;
    feedback::FeedbackParams fb;
    set_mixer::SetDevice device;
    set_mixer::VoltageTone signal_tone;
    set_mixer::VoltageTone lo_tone;
    InitialState initial;
    ProbeSweep probe;
    int n_traj = 100;
    std::uint64_t master_seed = 1000003;
    int dump_trajectories = 0;
    std::string out_dir = "out";
    bool svg = false;

    static ExperimentConfig defaults_for(Scenario scenario);
    static ExperimentConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
    void validate();

    hilbert::StateVector initial_state() const;
};

/// Parses a JSON configuration document. Throws std::invalid_argument naming
/// the offending field on unknown keys, bad values, or a missing scenario.
ExperimentConfig parse_config(const std::string& text);

/// Shipped presets: "paper-fig5", "paper-fig6", "desk-scale".
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace cqed::cli

#endif // CQED_CONFIG_HPP
