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

#include "cqed/models.hpp"

#include <cmath>
#include <stdexcept>

namespace cqed::models {

using hilbert::LinearOperator;
using hilbert::SpaceLayout;
using hilbert::annihilation_matrix;
using hilbert::embed;
using hilbert::number_matrix;
using hilbert::pauli_z;
using hilbert::sigma_minus;
using hilbert::sigma_plus;

void SystemParams::validate_and_resolve() {
    if (kappa <= 0.0) {
        throw std::invalid_argument("SystemParams: kappa must be > 0");
    }
    if (g != 0.0 && delta != 0.0) {
        const double derived = g * g / delta;
        if (chi == 0.0) {
            chi = derived;
        } else if (std::abs(chi - derived) > 1e-12 * std::abs(chi)) {
            throw std::invalid_argument("SystemParams: chi inconsistent with g^2/delta");
        }
    }
}

bool SystemParams::dispersive_regime_ok() const { return std::abs(delta) > 10.0 * g; }

LinearOperator jaynes_cummings(const SystemParams& params, int fock_dim) {
    const SpaceLayout layout = hilbert::qubit_oscillator_layout(fock_dim);
    const SparseMatrix a = embed(annihilation_matrix(fock_dim), 1, layout).matrix();
    const SparseMatrix adag = SparseMatrix(a.adjoint());
    const SparseMatrix n = embed(number_matrix(fock_dim), 1, layout).matrix();
    const SparseMatrix sz = embed(pauli_z(), 0, layout).matrix();
    const SparseMatrix sp = embed(sigma_plus(), 0, layout).matrix();
    const SparseMatrix sm = embed(sigma_minus(), 0, layout).matrix();
    const SparseMatrix id = hilbert::identity_matrix(layout.total_dim());

    SparseMatrix h = params.omega_r * (n + 0.5 * id) + (0.5 * params.omega_a) * sz +
                     params.g * SparseMatrix(adag * sm + a * sp);
    return LinearOperator(layout, std::move(h), true);
}

LinearOperator dispersive_one_qubit(const SystemParams& params, int fock_dim) {
    const SpaceLayout layout = hilbert::qubit_oscillator_layout(fock_dim);
    const SparseMatrix n = embed(number_matrix(fock_dim), 1, layout).matrix();
    const SparseMatrix sz = embed(pauli_z(), 0, layout).matrix();

    SparseMatrix h = params.omega_r * n + params.chi * SparseMatrix(sz * n) +
                     0.5 * (params.omega_a + params.chi) * sz;
    return LinearOperator(layout, std::move(h), true);
}

LinearOperator two_qubit_dispersive(double chi, int fock_dim) {
    const SpaceLayout layout = hilbert::two_qubit_oscillator_layout(fock_dim);
    const SparseMatrix n = embed(number_matrix(fock_dim), 2, layout).matrix();
    const hilbert::CollectiveOps col = hilbert::collective_ops(layout);
    const SparseMatrix exchange =
        SparseMatrix(col.raising[0].matrix() * col.lowering[1].matrix()) +
        SparseMatrix(col.lowering[0].matrix() * col.raising[1].matrix());

    SparseMatrix h = 2.0 * chi * SparseMatrix(col.jz.matrix() * n) + chi * exchange;
    return LinearOperator(layout, std::move(h), true);
}

LinearOperator driven_hamiltonian(const SystemParams& params, int fock_dim) {
    const SpaceLayout layout = hilbert::two_qubit_oscillator_layout(fock_dim);
    const SparseMatrix a = embed(annihilation_matrix(fock_dim), 2, layout).matrix();
    const SparseMatrix x = a + SparseMatrix(a.adjoint());

    SparseMatrix h = params.epsilon * x + two_qubit_dispersive(params.chi, fock_dim).matrix();
    return LinearOperator(layout, std::move(h), true);
}

LinearOperator collapse_operator(double kappa, const SpaceLayout& layout) {
    if (kappa <= 0.0) {
        throw std::invalid_argument("collapse_operator: kappa must be > 0");
    }
    const int last = layout.subsystem_count() - 1;
    SparseMatrix a = embed(annihilation_matrix(layout.dim(last)), last, layout).matrix();
    return LinearOperator(layout, std::sqrt(kappa) * a);
}

} // namespace cqed::models
