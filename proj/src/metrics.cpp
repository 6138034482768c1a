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

#include "cqed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqed::metrics {

namespace {

Eigen::Matrix4cd spin_flip() {
    // sigma_y (x) sigma_y, real in the computational basis.
    Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
}

} // namespace

Eigen::Vector4cd phi_plus() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = 1.0 / std::sqrt(2.0);
    return v;
}

void validate_density(const TwoQubitDensity& rho) {
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-10) {
        throw std::invalid_argument("two-qubit density: not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-10) {
        throw std::invalid_argument("two-qubit density: trace deviates from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw std::invalid_argument("two-qubit density: negative eigenvalue beyond tolerance");
    }
}

double concurrence(const TwoQubitDensity& rho_in) {
    const Eigen::Matrix4cd rho = 0.5 * (rho_in + rho_in.adjoint());
    validate_density(rho);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Vector4d evals = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho =
        es.eigenvectors() * evals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

    const Eigen::Matrix4cd flip = spin_flip();
    const Eigen::Matrix4cd rho_tilde = flip * rho.conjugate() * flip;
    const Eigen::Matrix4cd m = sqrt_rho * rho_tilde * sqrt_rho;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> ms(0.5 * (m + m.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    // Eigenvalues at round-off scale turn into ~1e-8 after the square root;
    // clip everything below the relative noise floor, not just negatives.
    Eigen::Vector4d mu = ms.eigenvalues();
    const double floor = 1e-14 * std::max(mu.cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 0; k < 4; ++k) {
        if (mu(k) < floor) {
            mu(k) = 0.0;
        }
    }
    Eigen::Vector4d lambdas = mu.cwiseSqrt();
    std::sort(lambdas.data(), lambdas.data() + 4, std::greater<double>());
    const double c = lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3);
    return std::max(0.0, c);
}

double fidelity_phi_plus(const TwoQubitDensity& rho) {
    const Eigen::Vector4cd target = phi_plus();
    const Complex overlap = target.dot(0.5 * (rho + rho.adjoint()) * target);
    return overlap.real();
}

double convergence_fraction(std::span<const double> final_fidelities, double threshold) {
    if (final_fidelities.empty()) {
        throw std::invalid_argument("convergence_fraction: empty ensemble");
    }
    if (threshold <= 0.0 || threshold >= 1.0) {
        throw std::invalid_argument("convergence_fraction: threshold must lie in (0,1)");
    }
    std::size_t hits = 0;
    for (double f : final_fidelities) {
        if (f > threshold) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(final_fidelities.size());
}

} // namespace cqed::metrics
