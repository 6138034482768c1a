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

#include "cqed/cavity_io.hpp"

#include <cmath>
#include <stdexcept>

#include "cqed/stochastic.hpp"

namespace cqed::cavity_io {

Complex transmission(double omega, int qubit_sign, const CavityResponse& resp) {
    if (resp.kappa <= 0.0) {
        throw std::invalid_argument("transmission: kappa must be > 0");
    }
    if (qubit_sign != 1 && qubit_sign != -1) {
        throw std::invalid_argument("transmission: qubit_sign must be +1 or -1");
    }
    const double detuning = resp.omega_r - omega + resp.chi * qubit_sign;
    return resp.kappa / Complex(resp.kappa, detuning);
}

double phase_shift(int qubit_sign, double g, double delta, double kappa) {
    if (delta == 0.0) {
        throw std::invalid_argument("phase_shift: delta must be nonzero");
    }
    return phase_shift_chi(qubit_sign, g * g / delta, kappa);
}

double phase_shift_chi(int qubit_sign, double chi, double kappa) {
    if (kappa <= 0.0) {
        throw std::invalid_argument("phase_shift: kappa must be > 0");
    }
    if (qubit_sign != 1 && qubit_sign != -1) {
        throw std::invalid_argument("phase_shift: qubit_sign must be +1 or -1");
    }
    return std::atan(-qubit_sign * chi / kappa);
}

Complex steady_state_field(const models::SystemParams& params, int qubit_sign, int fock_dim,
                           double t_max) {
    if (params.kappa <= 0.0) {
        throw std::invalid_argument("steady_state_field: kappa must be > 0");
    }
    if (qubit_sign != 1 && qubit_sign != -1) {
        throw std::invalid_argument("steady_state_field: qubit_sign must be +1 or -1");
    }
    if (t_max <= 0.0) {
        t_max = 60.0 / params.kappa;
    }

    // Conditioned on sigma_z the qubit is a spectator: the field alone obeys
    //   H = epsilon (a + a^dag) + chi * sign * a^dag a
    // in the frame of the drive at omega_r. The dissipator sqrt(2 kappa) a
    // damps the amplitude at kappa, the input-output rate behind
    // tan(theta) = chi/kappa.
    const SparseMatrix a = hilbert::annihilation_matrix(fock_dim);
    const SparseMatrix x = a + SparseMatrix(a.adjoint());
    const SparseMatrix n = hilbert::number_matrix(fock_dim);
    const SparseMatrix h = params.epsilon * x + (params.chi * qubit_sign) * n;
    const SparseMatrix collapse = std::sqrt(2.0 * params.kappa) * a;

    DenseMatrix rho = DenseMatrix::Zero(fock_dim, fock_dim);
    rho(0, 0) = 1.0;

    const double chunk = 2.0 / params.kappa;
    const double dt = chunk / 200.0;
    const double tol = 1e-10;
    Complex previous{1e30, 0.0};
    for (double t = 0.0; t < t_max; t += chunk) {
        rho = stochastic::lindblad_evolve(h, collapse, std::move(rho), chunk, dt);
        const Complex mean_a = (a * rho).trace();
        if (std::abs(mean_a - previous) <= tol * (std::abs(mean_a) + 1e-12)) {
            return mean_a;
        }
        previous = mean_a;
    }
    throw std::runtime_error("steady_state_field: no convergence by t_max");
}

std::pair<Complex, Complex> hybrid_ports(Complex v1, Complex v2) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {(v1 + v2) * inv_sqrt2, (v1 - v2) * inv_sqrt2};
}

} // namespace cqed::cavity_io
