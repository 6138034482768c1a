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

#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/cavity_io.hpp"
#include "cqed/config.hpp"
#include "cqed/report.hpp"

namespace {

using namespace cqed;
using nlohmann::json;

constexpr const char* kVersion = "cqedsim 0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct CommonFlags {
    std::string config_path;
    std::string preset_name;
    std::optional<std::uint64_t> seed;
    std::optional<int> traj;
    std::optional<std::string> out_dir;
    bool svg = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    cmd->add_option("--preset", flags.preset_name, "named preset (paper-fig5, paper-fig6, desk-scale)");
    cmd->add_option("--seed", flags.seed, "master seed override");
    cmd->add_option("--traj", flags.traj, "trajectory count override");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_flag("--svg", flags.svg, "emit SVG plots");
}

cli::ExperimentConfig resolve_config(cli::Scenario scenario, const CommonFlags& flags) {
    cli::ExperimentConfig cfg = cli::ExperimentConfig::defaults_for(scenario);
    if (!flags.preset_name.empty()) {
        cfg = cli::preset(flags.preset_name);
    }
    if (!flags.config_path.empty()) {
        json doc = json::parse(read_file(flags.config_path));
        if (!doc.contains("scenario")) {
            doc["scenario"] = cli::to_string(scenario);
        }
        cfg = cli::ExperimentConfig::from_json(doc);
    }
    if (cfg.scenario != scenario) {
        // A preset or file may carry another scenario; the subcommand wins
        // only when they agree, otherwise the mismatch is an error.
        throw std::invalid_argument("config scenario '" + cli::to_string(cfg.scenario) +
                                    "' does not match subcommand '" + cli::to_string(scenario) +
                                    "'");
    }
    if (flags.seed) {
        cfg.master_seed = *flags.seed;
    }
    if (flags.traj) {
        cfg.n_traj = *flags.traj;
    }
    if (flags.out_dir) {
        cfg.out_dir = *flags.out_dir;
    }
    if (flags.svg) {
        cfg.svg = true;
    }
    cfg.validate();
    return cfg;
}

void write_manifest(const cli::ExperimentConfig& cfg, json extra, double elapsed_seconds) {
    json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = cfg.to_json();
    manifest["master_seed"] = cfg.master_seed;
    manifest["elapsed_seconds"] = elapsed_seconds;
    for (auto& item : extra.items()) {
        manifest[item.key()] = item.value();
    }
    report::atomic_write(std::filesystem::path(cfg.out_dir) / "manifest.json",
                         manifest.dump(2) + "\n");
}

int run_phase_shift(const cli::ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const double kappa = cfg.system.kappa;
    const double chi = cfg.system.chi;
    for (int sign : {+1, -1}) {
        const double theta = cavity_io::phase_shift_chi(sign, chi, kappa);
        std::cout << "theta(sigma_z=" << (sign > 0 ? "+1" : "-1") << ") = " << theta << " rad\n";
    }

    cavity_io::CavityResponse resp{kappa, cfg.system.omega_r, chi};
    for (int sign : {+1, -1}) {
        std::ostringstream csv;
        csv << "omega,re,im,abs,arg\n";
        const double span = cfg.probe.span_kappas * kappa;
        for (int k = 0; k < cfg.probe.points; ++k) {
            const double omega =
                cfg.system.omega_r - span + 2.0 * span * k / (cfg.probe.points - 1);
            const Complex t = cavity_io::transmission(omega, sign, resp);
            csv << report::format_double(omega) << ',' << report::format_double(t.real()) << ','
                << report::format_double(t.imag()) << ',' << report::format_double(std::abs(t))
                << ',' << report::format_double(std::arg(t)) << '\n';
        }
        const std::string name = sign > 0 ? "transmission_up.csv" : "transmission_down.csv";
        report::atomic_write(std::filesystem::path(cfg.out_dir) / name, csv.str());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, {}, elapsed);
    return 0;
}

int run_set_mixer(const cli::ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const set_mixer::SetDevice& dev = cfg.device;
    const set_mixer::VoltageTone sig = cfg.signal_tone;
    const set_mixer::VoltageTone lo = cfg.lo_tone;
    const double delta_omega = std::abs(sig.omega - lo.omega);
    if (delta_omega <= 0.0) {
        throw std::invalid_argument("set-mixer: tones must have distinct frequencies");
    }

    // One beat period sampled densely, exact vs sideband approximation.
    const double beat = 2.0 * std::numbers::pi / delta_omega;
    const int samples = 4096;
    std::ostringstream series;
    series << "t,exact,approx\n";
    const std::vector<set_mixer::VoltageTone> tones{sig, lo};
    for (int k = 0; k <= samples; ++k) {
        const double t = beat * k / samples;
        series << report::format_double(t) << ','
               << report::format_double(set_mixer::exact_current(dev, tones, t)) << ','
               << report::format_double(set_mixer::sideband_current(dev, sig, lo, t)) << '\n';
    }
    report::atomic_write(std::filesystem::path(cfg.out_dir) / "set_mixer_timeseries.csv",
                         series.str());

    // Relative demodulation error of the approximation against the exact
    // model across an amplitude sweep; grows as amplitude^2.
    std::ostringstream table;
    table << "amplitude,relative_error\n";
    const double phi = lo.phi - sig.phi;
    for (double scale : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        set_mixer::VoltageTone s = sig;
        set_mixer::VoltageTone l = lo;
        s.x *= scale;
        s.y *= scale;
        l.x *= scale;
        l.y *= scale;
        std::vector<double> exact(samples + 1);
        std::vector<double> approx(samples + 1);
        const std::vector<set_mixer::VoltageTone> scaled{s, l};
        const double dt = beat / samples;
        for (int k = 0; k <= samples; ++k) {
            const double t = dt * k;
            exact[k] = set_mixer::exact_current(dev, scaled, t);
            approx[k] = set_mixer::sideband_current(dev, s, l, t);
        }
        const auto qe = set_mixer::demodulate(exact, dt, delta_omega, phi, 1);
        const auto qa = set_mixer::demodulate(approx, dt, delta_omega, phi, 1);
        const double err = std::hypot(qe.x - qa.x, qe.y - qa.y) / std::hypot(qa.x, qa.y);
        const double amp = dev.gate_coupling *
                           std::max({std::abs(s.x), std::abs(s.y), std::abs(l.x), std::abs(l.y)});
        table << report::format_double(amp) << ',' << report::format_double(err) << '\n';
    }
    report::atomic_write(std::filesystem::path(cfg.out_dir) / "set_mixer_error_scaling.csv",
                         table.str());

    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, {}, elapsed);
    return 0;
}

int run_lindblad(const cli::ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const int fock = cfg.sde.fock_dim;
    const auto model = stochastic::TwoQubitCavityModel::build(cfg.system.epsilon, cfg.system.chi,
                                                              cfg.system.kappa, fock);
    const hilbert::StateVector psi0 = cfg.initial_state();
    DenseMatrix rho = psi0.amplitudes * psi0.amplitudes.adjoint();
    const SparseMatrix collapse =
        models::collapse_operator(cfg.system.kappa, model.layout).matrix();

    std::vector<double> times;
    const std::int64_t steps = cfg.sde.step_count();
    for (std::int64_t k = 0; k <= steps; k += cfg.sde.sample_every) {
        times.push_back(k * cfg.sde.dt);
    }
    if (steps % cfg.sde.sample_every != 0) {
        times.push_back(cfg.sde.t_final);
    }
    const auto checkpoints =
        stochastic::lindblad_checkpoints(model.hamiltonian, collapse, rho, times, cfg.sde.dt);

    std::ostringstream csv;
    csv << "t,n_photon,x_quad,jz,purity,trace\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        const DenseMatrix& r = checkpoints[k];
        const double n = (model.number_op * r).trace().real();
        const double x = 2.0 * (model.annihilator * r).trace().real();
        const double jz = (model.jz * r).trace().real();
        const double purity = (r * r).trace().real();
        const double trace = r.trace().real();
        csv << report::format_double(times[k]) << ',' << report::format_double(n) << ','
            << report::format_double(x) << ',' << report::format_double(jz) << ','
            << report::format_double(purity) << ',' << report::format_double(trace) << '\n';
    }
    report::atomic_write(std::filesystem::path(cfg.out_dir) / "lindblad.csv", csv.str());
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, {}, elapsed);
    return 0;
}

int run_trajectory_scenario(const cli::ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const auto model = stochastic::TwoQubitCavityModel::build(cfg.system.epsilon, cfg.system.chi,
                                                              cfg.system.kappa, cfg.sde.fock_dim);
    stochastic::SdeConfig sde = cfg.sde;
    sde.seed = cfg.master_seed;
    sde.keep_record = true;
    const auto record =
        feedback::run_feedback_trajectory(model, cfg.initial_state(), sde, cfg.fb, 0);
    report::atomic_write(std::filesystem::path(cfg.out_dir) / "trajectory_0.csv",
                         report::trajectory_csv(record));
    json extra;
    extra["seeds"] = {record.stream_id};
    extra["max_top_fock_population"] = record.max_top_fock_population;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, extra, elapsed);
    return 0;
}

int run_feedback_ensemble(const cli::ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const auto model = stochastic::TwoQubitCavityModel::build(cfg.system.epsilon, cfg.system.chi,
                                                              cfg.system.kappa, cfg.sde.fock_dim);
    const hilbert::StateVector psi0 = cfg.initial_state();
    stochastic::SdeConfig sde = cfg.sde;
    const auto summary =
        feedback::run_ensemble(model, psi0, sde, cfg.fb, cfg.n_traj, cfg.master_seed);

    const std::filesystem::path out(cfg.out_dir);
    report::atomic_write(out / "summary.csv", report::summary_csv(summary));

    // Individual dumps replay the same per-trajectory streams the ensemble
    // used, so they match its members exactly.
    stochastic::SdeConfig dump_cfg = sde;
    dump_cfg.seed = cfg.master_seed;
    dump_cfg.keep_record = true;
    for (int k = 0; k < cfg.dump_trajectories; ++k) {
        const auto record = feedback::run_feedback_trajectory(model, psi0, dump_cfg, cfg.fb,
                                                              static_cast<std::uint64_t>(k));
        report::atomic_write(out / ("trajectory_" + std::to_string(k) + ".csv"),
                             report::trajectory_csv(record));
    }

    if (cfg.svg) {
        report::atomic_write(out / "fig5.svg",
                             report::svg_line_chart("Mean concurrence", "t", "concurrence",
                                                    summary.times, summary.mean_concurrence));
        report::atomic_write(out / "fig6.svg",
                             report::svg_line_chart("Mean fidelity with |phi+>", "t", "fidelity",
                                                    summary.times, summary.mean_fidelity));
    }

    json extra;
    extra["seeds"] = summary.trajectory_streams;
    extra["convergence_fraction"] = summary.convergence_fraction;
    extra["convergence_threshold"] = summary.convergence_threshold;
    json aborted = json::array();
    for (const auto& [stream, reason] : summary.aborted) {
        aborted.push_back({{"stream", stream}, {"reason", reason}});
    }
    extra["aborted"] = aborted;
    const int over_budget =
        static_cast<int>(std::count_if(summary.max_top_fock_population.begin(),
                                       summary.max_top_fock_population.end(),
                                       [](double p) { return p > 1e-4; }));
    if (over_budget > 0) {
        std::cerr << "warning: " << over_budget << "/" << summary.n_traj
                  << " trajectories exceeded top Fock-level population 1e-4; "
                  << "consider a larger fock_dim\n";
    }
    extra["trajectories_over_truncation_budget"] = over_budget;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, extra, elapsed);

    std::cout << "ensemble: " << summary.n_traj - static_cast<int>(summary.aborted.size()) << "/"
              << summary.n_traj << " trajectories, convergence fraction "
              << summary.convergence_fraction << " at threshold "
              << summary.convergence_threshold << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersive-readout and measurement-feedback simulator for circuit QED"};
    app.require_subcommand(1);

    struct Sub {
        cli::Scenario scenario;
        CLI::App* cmd;
        CommonFlags flags;
    };
    std::vector<Sub> subs;
    subs.reserve(8); // option bindings hold pointers into this vector
    auto add = [&](cli::Scenario scenario, const char* name, const char* help) {
        subs.push_back({scenario, app.add_subcommand(name, help), {}});
        add_common_flags(subs.back().cmd, subs.back().flags);
    };
    add(cli::Scenario::PhaseShift, "phase-shift",
        "qubit-conditioned cavity phase shift and transmission curve");
    add(cli::Scenario::SetMixer, "set-mixer",
        "exact vs first-order SET mixer current and error scaling");
    add(cli::Scenario::Lindblad, "lindblad", "deterministic master-equation evolution");
    add(cli::Scenario::Trajectory, "trajectory", "single stochastic trajectory");
    add(cli::Scenario::FeedbackEnsemble, "feedback-ensemble",
        "closed-loop entanglement stabilization ensemble");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& sub : subs) {
            if (!sub.cmd->parsed()) {
                continue;
            }
            const cli::ExperimentConfig cfg = resolve_config(sub.scenario, sub.flags);
            switch (sub.scenario) {
                case cli::Scenario::PhaseShift: return run_phase_shift(cfg);
                case cli::Scenario::SetMixer: return run_set_mixer(cfg);
                case cli::Scenario::Lindblad: return run_lindblad(cfg);
                case cli::Scenario::Trajectory: return run_trajectory_scenario(cfg);
                case cli::Scenario::FeedbackEnsemble: return run_feedback_ensemble(cfg);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
