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

#include "cqed/stochastic.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace cqed::stochastic {

using hilbert::LinearOperator;
using hilbert::SpaceLayout;
using hilbert::StateVector;

std::int64_t SdeConfig::step_count() const {
    const double raw = t_final / dt;
    const auto steps = static_cast<std::int64_t>(std::llround(raw));
    if (steps < 1 || std::abs(raw - static_cast<double>(steps)) > 1e-9 * raw) {
        throw std::invalid_argument("SdeConfig: t_final/dt must be a positive integer");
    }
    return steps;
}

void SdeConfig::validate() const {
    if (dt <= 0.0) {
        throw std::invalid_argument("SdeConfig: dt must be > 0");
    }
    if (fock_dim < 2) {
        throw std::invalid_argument("SdeConfig: fock_dim must be >= 2");
    }
    if (sample_every < 1) {
        throw std::invalid_argument("SdeConfig: sample_every must be >= 1");
    }
    if (noise_bridge < 0 || noise_bridge > 1) {
        throw std::invalid_argument("SdeConfig: noise_bridge must be 0 or 1");
    }
    (void)step_count();
}

TwoQubitCavityModel TwoQubitCavityModel::build(double epsilon, double chi, double kappa,
                                               int fock_dim) {
    if (kappa <= 0.0) {
        throw std::invalid_argument("TwoQubitCavityModel: kappa must be > 0");
    }
    const SpaceLayout layout = hilbert::two_qubit_oscillator_layout(fock_dim);
    models::SystemParams params;
    params.epsilon = epsilon;
    params.chi = chi;
    params.kappa = kappa;

    const hilbert::CollectiveOps col = hilbert::collective_ops(layout);
    SparseMatrix a = hilbert::embed(hilbert::annihilation_matrix(fock_dim), 2, layout).matrix();
    SparseMatrix n = hilbert::embed(hilbert::number_matrix(fock_dim), 2, layout).matrix();
    SparseMatrix h = models::driven_hamiltonian(params, fock_dim).matrix();

    TwoQubitCavityModel model{layout,
                              std::move(h),
                              std::move(a),
                              std::move(n),
                              col.jz.matrix(),
                              col.jx.matrix(),
                              kappa,
                              epsilon,
                              chi};
    model.hamiltonian.makeCompressed();
    model.annihilator.makeCompressed();
    model.number_op.makeCompressed();
    model.jz.makeCompressed();
    model.jx.makeCompressed();
    return model;
}

StateVector x_polarized_with_coherent(Complex alpha, int fock_dim) {
    const SpaceLayout layout = hilbert::two_qubit_oscillator_layout(fock_dim);
    const StateVector field = hilbert::coherent_state(alpha, fock_dim, 1e-6, /*quiet=*/true);
    Vector amps(layout.total_dim());
    for (int q = 0; q < 4; ++q) {
        amps.segment(q * fock_dim, fock_dim) = 0.5 * field.amplitudes;
    }
    return StateVector(layout, std::move(amps));
}

StateVector phi_plus_with_coherent(Complex alpha, int fock_dim) {
    const SpaceLayout layout = hilbert::two_qubit_oscillator_layout(fock_dim);
    const StateVector field = hilbert::coherent_state(alpha, fock_dim, 1e-6, /*quiet=*/true);
    Vector amps = Vector::Zero(layout.total_dim());
    const double w = 1.0 / std::sqrt(2.0);
    amps.segment(1 * fock_dim, fock_dim) = w * field.amplitudes; // |01>
    amps.segment(2 * fock_dim, fock_dim) = w * field.amplitudes; // |10>
    return StateVector(layout, std::move(amps));
}

double homodyne_increment(const StateVector& psi, double kappa, double dt, double dW) {
    if (std::abs(psi.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("homodyne_increment: state is not normalized");
    }
    const int last = psi.layout.subsystem_count() - 1;
    const SparseMatrix a =
        hilbert::embed(hilbert::annihilation_matrix(psi.layout.dim(last)), last, psi.layout)
            .matrix();
    const double x = 2.0 * psi.amplitudes.dot(a * psi.amplitudes).real();
    return kappa * x * dt + std::sqrt(kappa) * dW;
}

namespace {

/// Workspace for repeated Euler-Maruyama updates against fixed operators.
/// drift = -i H - (kappa/2) a^dag a is assembled once; each step costs two
/// sparse matvecs (plus one for the feedback term when active).
class SseEngine {
public:
    SseEngine(const SparseMatrix& hamiltonian, const SparseMatrix& annihilator,
              const SparseMatrix& number_op, const SparseMatrix* jx, double kappa, double dt)
        : a_(annihilator),
          jx_(jx),
          kappa_(kappa),
          dt_(dt),
          sqrt_kappa_(std::sqrt(kappa)) {
        drift_ = Complex(0.0, -1.0) * hamiltonian - Complex(0.5 * kappa, 0.0) * number_op;
        drift_.makeCompressed();
        const auto dim = hamiltonian.rows();
        a_psi_.resize(dim);
        drift_psi_.resize(dim);
        jx_psi_.resize(dim);
    }

    /// Advances psi in place; returns the measurement increment dI.
    /// fb_coefficient scales the extra -i * c * J_x |psi> dt term.
    double step(Vector& psi, double dW, double fb_coefficient) {
        a_psi_.noalias() = a_ * psi;
        const double x = 2.0 * psi.dot(a_psi_).real();
        const double dI = kappa_ * x * dt_ + sqrt_kappa_ * dW;

        drift_psi_.noalias() = drift_ * psi;
        if (fb_coefficient != 0.0) {
            jx_psi_.noalias() = *jx_ * psi;
            drift_psi_ += Complex(0.0, -fb_coefficient) * jx_psi_;
        }
        psi += dt_ * drift_psi_ + dI * a_psi_;

        const double norm = psi.norm();
        if (norm < 1e-12) {
            throw std::runtime_error("sse_step: state norm collapsed below 1e-12");
        }
        psi /= norm;
        return dI;
    }

    double x_quadrature(const Vector& psi) {
        a_psi_.noalias() = a_ * psi;
        return 2.0 * psi.dot(a_psi_).real();
    }

private:
    SparseMatrix drift_;
    const SparseMatrix& a_;
    const SparseMatrix* jx_;
    double kappa_;
    double dt_;
    double sqrt_kappa_;
    Vector a_psi_, drift_psi_, jx_psi_;
};

} // namespace

std::pair<StateVector, double> sse_step(const StateVector& psi, const LinearOperator& hamiltonian,
                                        double kappa, double dt, double dW,
                                        const LinearOperator* feedback) {
    if (hamiltonian.layout().total_dim() != psi.layout.total_dim()) {
        throw std::invalid_argument("sse_step: dimension mismatch");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("sse_step: state is not normalized");
    }
    const SpaceLayout& layout = psi.layout;
    const int last = layout.subsystem_count() - 1;
    const SparseMatrix a =
        hilbert::embed(hilbert::annihilation_matrix(layout.dim(last)), last, layout).matrix();
    const SparseMatrix n =
        hilbert::embed(hilbert::number_matrix(layout.dim(last)), last, layout).matrix();

    const SparseMatrix* fb_matrix = feedback ? &feedback->matrix() : nullptr;
    SseEngine engine(hamiltonian.matrix(), a, n, fb_matrix, kappa, dt);
    StateVector next = psi;
    const double dI = engine.step(next.amplitudes, dW, feedback ? 1.0 : 0.0);
    return {std::move(next), dI};
}

namespace {

void lindblad_rhs(const SparseMatrix& h, const SparseMatrix& l, const SparseMatrix& l_dag,
                  const SparseMatrix& l_dag_l, const DenseMatrix& rho, DenseMatrix& out,
                  DenseMatrix& scratch) {
    out.noalias() = Complex(0.0, -1.0) * (h * rho);
    out.noalias() += Complex(0.0, 1.0) * (rho * h);
    scratch.noalias() = l * rho;
    out.noalias() += scratch * l_dag;
    out.noalias() -= 0.5 * (l_dag_l * rho);
    out.noalias() -= 0.5 * (rho * l_dag_l);
}

struct Rk4Workspace {
    DenseMatrix k1, k2, k3, k4, stage, scratch;
    explicit Rk4Workspace(Eigen::Index dim)
        : k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim),
          scratch(dim, dim) {}
};

void rk4_step(const SparseMatrix& h, const SparseMatrix& l, const SparseMatrix& l_dag,
              const SparseMatrix& l_dag_l, DenseMatrix& rho, double dt, Rk4Workspace& w) {
    lindblad_rhs(h, l, l_dag, l_dag_l, rho, w.k1, w.scratch);
    w.stage = rho + (0.5 * dt) * w.k1;
    lindblad_rhs(h, l, l_dag, l_dag_l, w.stage, w.k2, w.scratch);
    w.stage = rho + (0.5 * dt) * w.k2;
    lindblad_rhs(h, l, l_dag, l_dag_l, w.stage, w.k3, w.scratch);
    w.stage = rho + dt * w.k3;
    lindblad_rhs(h, l, l_dag, l_dag_l, w.stage, w.k4, w.scratch);
    rho += (dt / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

} // namespace

DenseMatrix lindblad_evolve(const SparseMatrix& hamiltonian, const SparseMatrix& collapse,
                            DenseMatrix rho0, double t_final, double dt) {
    std::vector<double> times{t_final};
    auto result = lindblad_checkpoints(hamiltonian, collapse, std::move(rho0), times, dt);
    return std::move(result.back());
}

std::vector<DenseMatrix> lindblad_checkpoints(const SparseMatrix& hamiltonian,
                                              const SparseMatrix& collapse, DenseMatrix rho0,
                                              const std::vector<double>& times, double dt) {
    if (dt <= 0.0) {
        throw std::invalid_argument("lindblad: dt must be > 0");
    }
    if (hamiltonian.rows() != rho0.rows() || collapse.rows() != rho0.rows()) {
        throw std::invalid_argument("lindblad: dimension mismatch");
    }
    const SparseMatrix l_dag = collapse.adjoint();
    SparseMatrix l_dag_l = (l_dag * collapse).pruned();
    l_dag_l.makeCompressed();

    const double trace0 = rho0.trace().real();
    Rk4Workspace w(rho0.rows());

    std::vector<DenseMatrix> captures;
    captures.reserve(times.size());
    std::int64_t step = 0;
    for (double target : times) {
        const auto target_step = static_cast<std::int64_t>(std::llround(target / dt));
        if (target_step < step) {
            throw std::invalid_argument("lindblad: checkpoint times must be ascending");
        }
        for (; step < target_step; ++step) {
            rk4_step(hamiltonian, collapse, l_dag, l_dag_l, rho0, dt, w);
        }
        const double drift = std::abs(rho0.trace().real() - trace0);
        if (drift > 1e-6) {
            throw std::runtime_error("lindblad: trace drift exceeds 1e-6, reduce the step size");
        }
        captures.push_back(rho0);
    }
    return captures;
}

namespace {

using NoiseSource = std::variant<rng::WienerStream, rng::BridgedWienerStream>;

NoiseSource make_noise(const SdeConfig& config, std::uint64_t stream_id) {
    if (config.noise_bridge == 1) {
        return rng::BridgedWienerStream(config.seed, stream_id, 2.0 * config.dt);
    }
    return rng::WienerStream(config.seed, stream_id, config.dt);
}

double draw(NoiseSource& source) {
    return std::visit([](auto& s) { return s.next(); }, source);
}

struct SampleObservables {
    double jz, x, n, concurrence, fidelity, singlet, top;
};

SampleObservables measure(const TwoQubitCavityModel& model, const StateVector& psi,
                          SseEngine& engine) {
    SampleObservables out{};
    out.jz = psi.amplitudes.dot(model.jz * psi.amplitudes).real();
    out.x = engine.x_quadrature(psi.amplitudes);
    out.n = psi.amplitudes.dot(model.number_op * psi.amplitudes).real();

    const hilbert::DensityMatrix reduced = hilbert::partial_trace(psi, {0, 1});
    metrics::TwoQubitDensity rho_q = reduced.entries;
    out.concurrence = metrics::concurrence(rho_q);
    out.fidelity = metrics::fidelity_phi_plus(rho_q);

    // Singlet amplitude (psi_01n - psi_10n)/sqrt(2) per Fock level.
    const int fock_dim = model.layout.dim(2);
    double singlet = 0.0;
    for (int n = 0; n < fock_dim; ++n) {
        singlet += 0.5 * std::norm(psi.amplitudes[1 * fock_dim + n] -
                                   psi.amplitudes[2 * fock_dim + n]);
    }
    out.singlet = singlet;
    out.top = hilbert::top_fock_population(psi);
    return out;
}

} // namespace

TrajectoryRecord run_trajectory(const TwoQubitCavityModel& model, const StateVector& psi0,
                                const SdeConfig& config, StepController* controller,
                                std::uint64_t stream_id) {
    config.validate();
    if (psi0.layout != model.layout) {
        throw std::invalid_argument("run_trajectory: initial state layout mismatch");
    }
    const std::int64_t steps = config.step_count();

    NoiseSource noise = make_noise(config, stream_id);
    SseEngine engine(model.hamiltonian, model.annihilator, model.number_op, &model.jx,
                     model.kappa, config.dt);

    // Snapshot step indices (ascending).
    std::vector<std::int64_t> snapshot_steps;
    snapshot_steps.reserve(config.snapshot_times.size());
    for (double t : config.snapshot_times) {
        const auto k = static_cast<std::int64_t>(std::llround(t / config.dt));
        if (k < 0 || k > steps) {
            throw std::invalid_argument("run_trajectory: snapshot time outside horizon");
        }
        snapshot_steps.push_back(k);
    }

    TrajectoryRecord rec{.times = {},
                         .jz = {},
                         .x_quad = {},
                         .n_photon = {},
                         .concurrence = {},
                         .fidelity = {},
                         .smoothed_signal = {},
                         .singlet_population = {},
                         .top_fock_population = {},
                         .record = {},
                         .snapshots = {},
                         .final_state = psi0,
                         .seed = config.seed,
                         .stream_id = stream_id,
                         .max_top_fock_population = 0.0,
                         .max_singlet_population = 0.0};
    if (config.keep_record) {
        rec.record.increments.reserve(steps);
        rec.record.dt = config.dt;
    }

    StateVector psi = psi0;
    psi.normalize();

    auto sample = [&](std::int64_t k) {
        const SampleObservables obs = measure(model, psi, engine);
        rec.times.push_back(static_cast<double>(k) * config.dt);
        rec.jz.push_back(obs.jz);
        rec.x_quad.push_back(obs.x);
        rec.n_photon.push_back(obs.n);
        rec.concurrence.push_back(obs.concurrence);
        rec.fidelity.push_back(obs.fidelity);
        rec.smoothed_signal.push_back(controller ? controller->smoothed() : 0.0);
        rec.singlet_population.push_back(obs.singlet);
        rec.top_fock_population.push_back(obs.top);
        rec.max_singlet_population = std::max(rec.max_singlet_population, obs.singlet);
    };

    std::size_t next_snapshot = 0;
    auto maybe_snapshot = [&](std::int64_t k) {
        while (next_snapshot < snapshot_steps.size() && snapshot_steps[next_snapshot] == k) {
            rec.snapshots.push_back(psi);
            ++next_snapshot;
        }
    };

    sample(0);
    maybe_snapshot(0);
    for (std::int64_t k = 0; k < steps; ++k) {
        const double coefficient = controller ? controller->coefficient() : 0.0;
        const double dW = draw(noise);
        const double dI = engine.step(psi.amplitudes, dW, coefficient);
        if (controller) {
            controller->observe(dI);
        }
        if (config.keep_record) {
            rec.record.increments.push_back(dI);
        }
        rec.max_top_fock_population =
            std::max(rec.max_top_fock_population, hilbert::top_fock_population(psi));
        const std::int64_t done = k + 1;
        if (done % config.sample_every == 0 || done == steps) {
            sample(done);
        }
        maybe_snapshot(done);
    }

    rec.final_state = psi;
    return rec;
}

} // namespace cqed::stochastic
