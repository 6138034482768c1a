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

#ifndef CQED_HILBERT_HPP
#define CQED_HILBERT_HPP

#include <array>
#include <vector>

#include "cqed/types.hpp"

namespace cqed::hilbert {

/// Ordered list of subsystem dimensions making up a composite Hilbert space.
/// Convention used throughout: qubits first, oscillator last. Composite
/// indices are row-major, so for dims {2, 2, N} the flat index of
/// |q1 q2 n> is (q1*2 + q2)*N + n.
class SpaceLayout {
public:
    explicit SpaceLayout(std::vector<int> dims);

    int subsystem_count() const { return static_cast<int>(dims_.size()); }
    int dim(int subsystem) const { return dims_.at(subsystem); }
    int total_dim() const { return total_; }
    const std::vector<int>& dims() const { return dims_; }

    /// Number of leading subsystems of dimension 2.
    int qubit_count() const;

    bool operator==(const SpaceLayout& other) const { return dims_ == other.dims_; }
    bool operator!=(const SpaceLayout& other) const { return !(*this == other); }

private:
    std::vector<int> dims_;
    int total_ = 0;
};

inline SpaceLayout qubit_oscillator_layout(int fock_dim) { return SpaceLayout({2, fock_dim}); }
inline SpaceLayout two_qubit_oscillator_layout(int fock_dim) { return SpaceLayout({2, 2, fock_dim}); }
inline SpaceLayout oscillator_layout(int fock_dim) { return SpaceLayout({fock_dim}); }

/// Complex amplitude vector over the composite basis. Mutable, single-owner;
/// all shared operator data is immutable after construction.
struct StateVector {
    SpaceLayout layout;
    Vector amplitudes;

    StateVector(SpaceLayout l, Vector a);

    double norm() const { return amplitudes.norm(); }
    /// Rescales to unit norm. Throws std::runtime_error when the norm has
    /// collapsed below 1e-12 (numerical blow-up).
    void normalize();
};

/// Sparse operator on a composite space. When constructed with
/// hermitian = true the matrix is verified against max|M - M^dag| <= 1e-12.
class LinearOperator {
public:
    LinearOperator(SpaceLayout layout, SparseMatrix entries, bool hermitian = false);

    const SpaceLayout& layout() const { return layout_; }
    const SparseMatrix& matrix() const { return matrix_; }
    bool is_hermitian() const { return hermitian_; }

    LinearOperator adjoint() const;

private:
    SpaceLayout layout_;
    SparseMatrix matrix_;
    bool hermitian_ = false;
};

struct DensityMatrix {
    SpaceLayout layout;
    DenseMatrix entries;

    double trace_real() const { return entries.trace().real(); }
    /// Checks hermiticity (1e-10), unit trace (1e-10) and spectrum >= -1e-10.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Single-subsystem building blocks (raw sparse matrices).
// ---------------------------------------------------------------------------

SparseMatrix identity_matrix(int dim);
/// <n-1|a|n> = sqrt(n). Requires fock_dim >= 2.
SparseMatrix annihilation_matrix(int fock_dim);
SparseMatrix number_matrix(int fock_dim);

// Pauli matrices in the basis (|0>, |1>) with sigma_z = diag(+1, -1),
// i.e. |0> is the +1 eigenstate of sigma_z. sigma_plus = |0><1|.
SparseMatrix pauli_x();
SparseMatrix pauli_y();
SparseMatrix pauli_z();
SparseMatrix sigma_plus();
SparseMatrix sigma_minus();

// ---------------------------------------------------------------------------
// Composite-space operations.
// ---------------------------------------------------------------------------

/// Kronecker product of one factor per subsystem, in layout order. The
/// result lives on the concatenation of the factor layouts.
LinearOperator tensor_product(const std::vector<LinearOperator>& factors);

/// Single-subsystem annihilation operator as a LinearOperator on {fock_dim}.
LinearOperator annihilation(int fock_dim);

/// op acting on subsystem `target` of `layout`, identity elsewhere.
LinearOperator embed(const SparseMatrix& op, int target, const SpaceLayout& layout,
                     bool hermitian = false);

/// Collective two-qubit operators embedded on the full space. Requires a
/// layout whose first two subsystems are qubits.
struct CollectiveOps {
    LinearOperator jz;                      // (sigma1_z + sigma2_z)/2
    LinearOperator jx;                      // (sigma1_x + sigma2_x)/2
    std::array<LinearOperator, 2> raising;  // sigma_i^+
    std::array<LinearOperator, 2> lowering; // sigma_i^-
};
CollectiveOps collective_ops(const SpaceLayout& layout);

/// Reduced density matrix over the subsystems listed in `keep` (ascending,
/// nonempty). Trace is preserved to 1e-10.
DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// <psi|M|psi> for a normalized state. For Hermitian-flagged operators the
/// imaginary residue is checked against 1e-10 and the real part is returned.
Complex expectation(const StateVector& psi, const LinearOperator& op);

/// Basis state |indices[0], indices[1], ...>.
StateVector basis_state(const SpaceLayout& layout, const std::vector<int>& indices);

/// Truncated coherent state, renormalized on {fock_dim}. When the truncated
/// top-level population exceeds `warn_threshold` of the norm a single line is
/// written to stderr (suppressed by quiet). alpha = 3 with fock_dim = 25
/// carries ~1.6e-5 at the top level, so it does trip the default threshold.
StateVector coherent_state(Complex alpha, int fock_dim, double warn_threshold = 1e-6,
                           bool quiet = false);

/// Top Fock-level population |<N-1|psi>|^2 summed over the other subsystems.
/// The oscillator is assumed to be the last subsystem.
double top_fock_population(const StateVector& psi);

} // namespace cqed::hilbert

#endif // CQED_HILBERT_HPP
