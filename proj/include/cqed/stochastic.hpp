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

#ifndef CQED_STOCHASTIC_HPP
#define CQED_STOCHASTIC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cqed/hilbert.hpp"
#include "cqed/metrics.hpp"
#include "cqed/models.hpp"
#include "cqed/rng.hpp"

namespace cqed::stochastic {

/// Fixed-step integration grid. t_final/dt must be an integer number of
/// steps and steps must divide evenly into sample_every blocks.
struct SdeConfig {
    double dt = 1e-4;
    double t_final = 10.0;
    std::uint64_t seed = 0;
    int fock_dim = 25;
    int sample_every = 100;
    bool keep_record = false;
    /// When 1, Wiener increments at dt refine a parent stream at 2*dt by
    /// midpoint bridging, so a halved-dt run sees the same Brownian path as
    /// the parent run. Used by the dt-robustness check.
    int noise_bridge = 0;
    /// Times at which the full state is captured into TrajectoryRecord.
    std::vector<double> snapshot_times;

    std::int64_t step_count() const;
    void validate() const;
};

struct HomodyneRecord {
    std::vector<double> increments;
    double dt = 0.0;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> jz;
    std::vector<double> x_quad;
    std::vector<double> n_photon;
    std::vector<double> concurrence;
    std::vector<double> fidelity;
    std::vector<double> smoothed_signal;      // filtered record R (0 open loop)
    std::vector<double> singlet_population;
    std::vector<double> top_fock_population;
    HomodyneRecord record;                    // filled when keep_record
    std::vector<hilbert::StateVector> snapshots;
    hilbert::StateVector final_state;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    double max_top_fock_population = 0.0;
    double max_singlet_population = 0.0;
};

/// Per-step actuator hook. coefficient() scales the extra Hamiltonian term
/// -i * c * J_x |psi> dt applied within the step; observe(dI) feeds the
/// measurement increment back after the step, so actuation always lags the
/// record by one step.
class StepController {
public:
    virtual ~StepController() = default;
    virtual double coefficient() const = 0;
    virtual void observe(double dI) = 0;
    virtual double smoothed() const = 0;
};

/// Immutable operator bundle for the driven two-qubit dispersive system on
/// {2, 2, fock_dim}; shared read-only across trajectory workers.
struct TwoQubitCavityModel {
    hilbert::SpaceLayout layout;
    SparseMatrix hamiltonian;  // epsilon (a + a^dag) + chi (2 J_z n + exchange)
    SparseMatrix annihilator;  // a embedded
    SparseMatrix number_op;    // a^dag a embedded
    SparseMatrix jz;
    SparseMatrix jx;
    double kappa = 0.0;
    double epsilon = 0.0;
    double chi = 0.0;

    static TwoQubitCavityModel build(double epsilon, double chi, double kappa, int fock_dim);
};

// Initial states used by the protocol.
hilbert::StateVector x_polarized_with_coherent(Complex alpha, int fock_dim);
hilbert::StateVector phi_plus_with_coherent(Complex alpha, int fock_dim);

/// dI = kappa <a + a^dag> dt + sqrt(kappa) dW, expectation in the current
/// (normalized) state. Throws when the state norm deviates from 1 by more
/// than 1e-6.
double homodyne_increment(const hilbert::StateVector& psi, double kappa, double dt,
                          double dW);

/// One Euler-Maruyama update of the linear unnormalized homodyne SSE
///   d|psi> = [-i H - (kappa/2) a^dag a]|psi> dt + dI a |psi>
/// plus -i * feedback * |psi> dt when supplied, followed by renormalization.
/// dI uses the normalized pre-step state. Returns (psi', dI). Throws
/// std::runtime_error when the pre-normalization norm collapses below 1e-12.
std::pair<hilbert::StateVector, double> sse_step(const hilbert::StateVector& psi,
                                                 const hilbert::LinearOperator& hamiltonian,
                                                 double kappa, double dt, double dW,
                                                 const hilbert::LinearOperator* feedback = nullptr);

/// Fixed-step RK4 integration of
///   drho/dt = -i[H, rho] + L rho L^dag - 1/2 {L^dag L, rho}.
/// Trace drift beyond 1e-6 raises std::runtime_error (step size too large).
DenseMatrix lindblad_evolve(const SparseMatrix& hamiltonian, const SparseMatrix& collapse,
                            DenseMatrix rho0, double t_final, double dt);

/// Same integration, capturing rho at each requested time (ascending).
std::vector<DenseMatrix> lindblad_checkpoints(const SparseMatrix& hamiltonian,
                                              const SparseMatrix& collapse, DenseMatrix rho0,
                                              const std::vector<double>& times, double dt);

/// Full SSE trajectory from psi0. Observables are sampled at t = 0, every
/// sample_every steps, and at t_final; the Wiener stream is derived from
/// (config.seed, stream_id) so runs replay bit-exactly.
TrajectoryRecord run_trajectory(const TwoQubitCavityModel& model,
                                const hilbert::StateVector& psi0, const SdeConfig& config,
                                StepController* controller = nullptr,
                                std::uint64_t stream_id = 0);

} // namespace cqed::stochastic

#endif // CQED_STOCHASTIC_HPP
