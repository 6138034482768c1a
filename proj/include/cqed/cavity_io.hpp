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

#ifndef CQED_CAVITY_IO_HPP
#define CQED_CAVITY_IO_HPP

#include <utility>

#include "cqed/models.hpp"

namespace cqed::cavity_io {

/// Closed-form response of the dispersively pulled cavity. kappa here is the
/// total linewidth that appears in tan(theta) = chi/kappa.
struct CavityResponse {
    double kappa = 0.0;
    double omega_r = 0.0;
    double chi = 0.0;
};

/// Coefficient multiplying the input mode in the output spectrum:
///   kappa / (kappa + i (omega_r - omega + chi * qubit_sign)).
/// The vacuum-port term is dropped; it contributes no normally ordered
/// moments.
Complex transmission(double omega, int qubit_sign, const CavityResponse& resp);

/// Qubit-conditioned phase of the transmitted field at omega = omega_r:
///   theta = atan(-qubit_sign * g^2 / (kappa * delta)).
/// Odd in qubit_sign and in chi. Throws on delta == 0 or kappa <= 0.
double phase_shift(int qubit_sign, double g, double delta, double kappa);

/// Same phase expressed through chi = g^2/delta.
double phase_shift_chi(int qubit_sign, double chi, double kappa);

/// Steady state <a>_ss of the driven, damped, dispersively pulled cavity
/// conditioned on sigma_z = qubit_sign, obtained by integrating the master
/// equation to convergence (the oracle route; no closed form is used).
///
/// The master-equation damping is chosen so that the field amplitude decays
/// at the rate kappa of the input-output convention: the dissipator is
/// D[sqrt(2 kappa) a]. With that mapping arg(<a>_ss) equals
/// phase_shift_chi(qubit_sign, chi, kappa) up to the fixed -pi/2 offset set
/// by the drive phase.
///
/// Throws std::runtime_error when the steady-state iteration has not
/// converged by t_max.
Complex steady_state_field(const models::SystemParams& params, int qubit_sign,
                           int fock_dim = 16, double t_max = 0.0);

/// Four-port hybrid normalized to be lossless:
///   ((v1 + v2)/sqrt(2), (v1 - v2)/sqrt(2)).
/// The bare sum/difference form is not power conserving; the 1/sqrt(2) makes
/// the coupler unitary.
std::pair<Complex, Complex> hybrid_ports(Complex v1, Complex v2);

} // namespace cqed::cavity_io

#endif // CQED_CAVITY_IO_HPP
