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

#ifndef CQED_METRICS_HPP
#define CQED_METRICS_HPP

#include <span>

#include "cqed/types.hpp"

namespace cqed::metrics {

using TwoQubitDensity = Eigen::Matrix4cd;

/// |phi+> = (|01> + |10>)/sqrt(2) in the row-major two-qubit basis.
Eigen::Vector4cd phi_plus();

/// Hermiticity to 1e-10, unit trace to 1e-10, spectrum >= -1e-9.
/// Throws std::invalid_argument otherwise.
void validate_density(const TwoQubitDensity& rho);

/// Wootters concurrence C = max(0, l1 - l2 - l3 - l4), the l_i being the
/// decreasing square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
/// Computed through the Hermitian form sqrt(rho) rho~ sqrt(rho) so the
/// spectrum is real and nonnegative by construction; round-off negatives are
/// clipped at zero. Input is Hermitized ((M + M^dag)/2) before scoring.
double concurrence(const TwoQubitDensity& rho);

/// <phi+| rho |phi+>.
double fidelity_phi_plus(const TwoQubitDensity& rho);

/// Fraction of trajectories with final fidelity > threshold.
/// Throws std::invalid_argument on an empty ensemble or threshold outside (0,1).
double convergence_fraction(std::span<const double> final_fidelities, double threshold);

} // namespace cqed::metrics

#endif // CQED_METRICS_HPP
