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

#ifndef CQED_MODELS_HPP
#define CQED_MODELS_HPP

#include "cqed/hilbert.hpp"

namespace cqed::models {

/// Physical rates, hbar = 1, time units arbitrary. chi = g^2/delta is the
/// dispersive cavity pull. When g and delta are both nonzero and chi was set
/// independently, validate() enforces |chi - g^2/delta| <= 1e-12 * |chi|.
struct SystemParams {
    double omega_r = 0.0;  // cavity frequency
    double omega_a = 0.0;  // qubit splitting
    double g = 0.0;        // qubit-cavity coupling
    double kappa = 0.0;    // cavity damping rate
    double chi = 0.0;      // dispersive shift g^2/delta
    double epsilon = 0.0;  // drive amplitude
    double delta = 0.0;    // detuning omega_a - omega_r

    /// Fills chi from g^2/delta when unset, then checks invariants.
    /// Throws std::invalid_argument on kappa <= 0 or inconsistent chi.
    void validate_and_resolve();

    /// Dispersive approximation is trusted for |delta| > 10 g.
    bool dispersive_regime_ok() const;
};

/// omega_r (a^dag a + 1/2) + (omega_a/2) sigma_z + g (a^dag sigma^- + a sigma^+)
/// on the 2 (x) fock_dim layout.
hilbert::LinearOperator jaynes_cummings(const SystemParams& params, int fock_dim);

/// (omega_r + chi sigma_z) a^dag a + (omega_a + chi)/2 sigma_z. The constant
/// omega_r/2 offset is dropped; it only shifts the global phase. Diagonal in
/// the computational (x) Fock basis.
hilbert::LinearOperator dispersive_one_qubit(const SystemParams& params, int fock_dim);

/// Two qubits sharing one mode, interaction picture:
///   2 chi J_z a^dag a + chi (sigma1^+ sigma2^- + sigma1^- sigma2^+).
/// The single-qubit (omega_a + chi) J_z term is absorbed into the qubit
/// rotating frame and does not appear here.
hilbert::LinearOperator two_qubit_dispersive(double chi, int fock_dim);

/// epsilon (a + a^dag) + two_qubit_dispersive(chi): the driven two-qubit
/// dispersive Hamiltonian in the frame rotating at the drive.
hilbert::LinearOperator driven_hamiltonian(const SystemParams& params, int fock_dim);

/// sqrt(kappa) * a embedded on the composite space (oscillator last).
hilbert::LinearOperator collapse_operator(double kappa, const hilbert::SpaceLayout& layout);

} // namespace cqed::models

#endif // CQED_MODELS_HPP
