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

#include "cqed/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace cqed::hilbert {

namespace {

double max_abs_deviation_from_adjoint(const SparseMatrix& m) {
    SparseMatrix diff = SparseMatrix(m.adjoint()) - m;
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

} // namespace

SpaceLayout::SpaceLayout(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw std::invalid_argument("SpaceLayout: no subsystems");
    }
    total_ = 1;
    for (int d : dims_) {
        if (d < 2) {
            throw std::invalid_argument("SpaceLayout: every subsystem dimension must be >= 2");
        }
        total_ *= d;
    }
}

int SpaceLayout::qubit_count() const {
    int n = 0;
    while (n < subsystem_count() && dims_[n] == 2) {
        ++n;
    }
    return n;
}

StateVector::StateVector(SpaceLayout l, Vector a) : layout(std::move(l)), amplitudes(std::move(a)) {
    if (amplitudes.size() != layout.total_dim()) {
        throw std::invalid_argument("StateVector: amplitude length does not match layout");
    }
}

void StateVector::normalize() {
    const double n = amplitudes.norm();
    if (n < 1e-12) {
        throw std::runtime_error("StateVector: norm collapsed below 1e-12");
    }
    amplitudes /= n;
}

LinearOperator::LinearOperator(SpaceLayout layout, SparseMatrix entries, bool hermitian)
    : layout_(std::move(layout)), matrix_(std::move(entries)), hermitian_(hermitian) {
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("LinearOperator: matrix must be square");
    }
    if (matrix_.rows() != layout_.total_dim()) {
        throw std::invalid_argument("LinearOperator: matrix dimension does not match layout");
    }
    matrix_.makeCompressed();
    if (hermitian_) {
        const double dev = max_abs_deviation_from_adjoint(matrix_);
        if (dev > 1e-12) {
            throw std::invalid_argument("LinearOperator: hermitian flag set but max|M - M^dag| = " +
                                        std::to_string(dev));
        }
    }
}

LinearOperator LinearOperator::adjoint() const {
    return LinearOperator(layout_, SparseMatrix(matrix_.adjoint()), hermitian_);
}

void DensityMatrix::validate() const {
    if (entries.rows() != entries.cols() || entries.rows() != layout.total_dim()) {
        throw std::invalid_argument("DensityMatrix: dimension mismatch");
    }
    const double herm_dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-10) {
        throw std::invalid_argument("DensityMatrix: not Hermitian, deviation " +
                                    std::to_string(herm_dev));
    }
    if (std::abs(entries.trace() - Complex(1.0, 0.0)) > 1e-10) {
        throw std::invalid_argument("DensityMatrix: trace deviates from 1");
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (entries + entries.adjoint()),
                                                  Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
    }
}

SparseMatrix identity_matrix(int dim) {
    SparseMatrix m(dim, dim);
    m.setIdentity();
    return m;
}

SparseMatrix annihilation_matrix(int fock_dim) {
    if (fock_dim < 2) {
        throw std::invalid_argument("annihilation: Fock dimension must be >= 2");
    }
    SparseMatrix a(fock_dim, fock_dim);
    std::vector<Triplet> entries;
    entries.reserve(fock_dim - 1);
    for (int n = 1; n < fock_dim; ++n) {
        entries.emplace_back(n - 1, n, Complex(std::sqrt(static_cast<double>(n)), 0.0));
    }
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

SparseMatrix number_matrix(int fock_dim) {
    if (fock_dim < 2) {
        throw std::invalid_argument("number operator: Fock dimension must be >= 2");
    }
    SparseMatrix n(fock_dim, fock_dim);
    std::vector<Triplet> entries;
    for (int k = 1; k < fock_dim; ++k) {
        entries.emplace_back(k, k, Complex(static_cast<double>(k), 0.0));
    }
    n.setFromTriplets(entries.begin(), entries.end());
    return n;
}

namespace {

SparseMatrix two_by_two(Complex m00, Complex m01, Complex m10, Complex m11) {
    SparseMatrix m(2, 2);
    std::vector<Triplet> entries;
    if (m00 != Complex{}) entries.emplace_back(0, 0, m00);
    if (m01 != Complex{}) entries.emplace_back(0, 1, m01);
    if (m10 != Complex{}) entries.emplace_back(1, 0, m10);
    if (m11 != Complex{}) entries.emplace_back(1, 1, m11);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

} // namespace

SparseMatrix pauli_x() { return two_by_two(0, 1, 1, 0); }
SparseMatrix pauli_y() { return two_by_two(0, Complex(0, -1), Complex(0, 1), 0); }
SparseMatrix pauli_z() { return two_by_two(1, 0, 0, -1); }
SparseMatrix sigma_plus() { return two_by_two(0, 1, 0, 0); }
SparseMatrix sigma_minus() { return two_by_two(0, 0, 1, 0); }

namespace {

SparseMatrix kron_sparse(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
    for (int ka = 0; ka < a.outerSize(); ++ka) {
        for (SparseMatrix::InnerIterator ita(a, ka); ita; ++ita) {
            for (int kb = 0; kb < b.outerSize(); ++kb) {
                for (SparseMatrix::InnerIterator itb(b, kb); itb; ++itb) {
                    entries.emplace_back(ita.row() * b.rows() + itb.row(),
                                         ita.col() * b.cols() + itb.col(),
                                         ita.value() * itb.value());
                }
            }
        }
    }
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

} // namespace

LinearOperator tensor_product(const std::vector<LinearOperator>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("tensor_product: no factors");
    }
    std::vector<int> dims;
    bool hermitian = true;
    for (const auto& f : factors) {
        if (f.matrix().rows() != f.layout().total_dim()) {
            throw std::invalid_argument("tensor_product: factor dimension mismatch with layout");
        }
        dims.insert(dims.end(), f.layout().dims().begin(), f.layout().dims().end());
        hermitian = hermitian && f.is_hermitian();
    }
    SparseMatrix result = factors.front().matrix();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        result = kron_sparse(result, factors[k].matrix());
    }
    return LinearOperator(SpaceLayout(dims), std::move(result), hermitian);
}

LinearOperator annihilation(int fock_dim) {
    return LinearOperator(oscillator_layout(fock_dim), annihilation_matrix(fock_dim));
}

LinearOperator embed(const SparseMatrix& op, int target, const SpaceLayout& layout,
                     bool hermitian) {
    if (target < 0 || target >= layout.subsystem_count()) {
        throw std::invalid_argument("embed: subsystem index out of range");
    }
    if (op.rows() != layout.dim(target) || op.cols() != layout.dim(target)) {
        throw std::invalid_argument("embed: operator dimension mismatch with layout");
    }
    SparseMatrix result = (target == 0) ? op : identity_matrix(layout.dim(0));
    if (target == 0 && layout.subsystem_count() == 1) {
        return LinearOperator(layout, result, hermitian);
    }
    if (target != 0) {
        for (int k = 1; k < layout.subsystem_count(); ++k) {
            result = kron_sparse(result, k == target ? op : identity_matrix(layout.dim(k)));
        }
    } else {
        for (int k = 1; k < layout.subsystem_count(); ++k) {
            result = kron_sparse(result, identity_matrix(layout.dim(k)));
        }
    }
    return LinearOperator(layout, std::move(result), hermitian);
}

CollectiveOps collective_ops(const SpaceLayout& layout) {
    if (layout.qubit_count() < 2) {
        throw std::invalid_argument("collective_ops: layout must start with two qubits");
    }
    const SparseMatrix sz = pauli_z();
    const SparseMatrix sx = pauli_x();
    LinearOperator sz1 = embed(sz, 0, layout, true);
    LinearOperator sz2 = embed(sz, 1, layout, true);
    LinearOperator sx1 = embed(sx, 0, layout, true);
    LinearOperator sx2 = embed(sx, 1, layout, true);
    SparseMatrix jz = 0.5 * (sz1.matrix() + sz2.matrix());
    SparseMatrix jx = 0.5 * (sx1.matrix() + sx2.matrix());
    return CollectiveOps{
        LinearOperator(layout, std::move(jz), true),
        LinearOperator(layout, std::move(jx), true),
        {embed(sigma_plus(), 0, layout), embed(sigma_plus(), 1, layout)},
        {embed(sigma_minus(), 0, layout), embed(sigma_minus(), 1, layout)},
    };
}

namespace {

struct TraceIndexing {
    std::vector<int> keep_dims;
    std::vector<int> env_dims;
    int keep_total = 1;
    int env_total = 1;
    // strides of each subsystem in the full index
    std::vector<int> keep_strides;
    std::vector<int> env_strides;
};

TraceIndexing make_trace_indexing(const SpaceLayout& layout, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must be nonempty");
    }
    std::vector<bool> kept(layout.subsystem_count(), false);
    for (int s : keep) {
        if (s < 0 || s >= layout.subsystem_count()) {
            throw std::invalid_argument("partial_trace: invalid subsystem index");
        }
        if (kept[s]) {
            throw std::invalid_argument("partial_trace: duplicate subsystem index");
        }
        kept[s] = true;
    }
    std::vector<int> strides(layout.subsystem_count(), 1);
    for (int s = layout.subsystem_count() - 2; s >= 0; --s) {
        strides[s] = strides[s + 1] * layout.dim(s + 1);
    }
    TraceIndexing ix;
    for (int s = 0; s < layout.subsystem_count(); ++s) {
        if (kept[s]) {
            ix.keep_dims.push_back(layout.dim(s));
            ix.keep_strides.push_back(strides[s]);
            ix.keep_total *= layout.dim(s);
        } else {
            ix.env_dims.push_back(layout.dim(s));
            ix.env_strides.push_back(strides[s]);
            ix.env_total *= layout.dim(s);
        }
    }
    return ix;
}

// Flat offset in the full space of composite index `value` over the listed
// subsystems (row-major over dims).
int unflatten_offset(int value, const std::vector<int>& dims, const std::vector<int>& strides) {
    int offset = 0;
    for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
        offset += (value % dims[s]) * strides[s];
        value /= dims[s];
    }
    return offset;
}

} // namespace

DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep) {
    std::vector<int> sorted_keep = keep;
    std::sort(sorted_keep.begin(), sorted_keep.end());
    const TraceIndexing ix = make_trace_indexing(psi.layout, sorted_keep);

    std::vector<int> env_offsets(ix.env_total);
    for (int e = 0; e < ix.env_total; ++e) {
        env_offsets[e] = unflatten_offset(e, ix.env_dims, ix.env_strides);
    }
    std::vector<int> keep_offsets(ix.keep_total);
    for (int k = 0; k < ix.keep_total; ++k) {
        keep_offsets[k] = unflatten_offset(k, ix.keep_dims, ix.keep_strides);
    }

    DenseMatrix rho = DenseMatrix::Zero(ix.keep_total, ix.keep_total);
    for (int i = 0; i < ix.keep_total; ++i) {
        for (int j = 0; j <= i; ++j) {
            Complex acc = 0.0;
            for (int e = 0; e < ix.env_total; ++e) {
                acc += psi.amplitudes[keep_offsets[i] + env_offsets[e]] *
                       std::conj(psi.amplitudes[keep_offsets[j] + env_offsets[e]]);
            }
            rho(i, j) = acc;
            if (i != j) {
                rho(j, i) = std::conj(acc);
            }
        }
    }
    return DensityMatrix{SpaceLayout(ix.keep_dims), std::move(rho)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    std::vector<int> sorted_keep = keep;
    std::sort(sorted_keep.begin(), sorted_keep.end());
    const TraceIndexing ix = make_trace_indexing(rho.layout, sorted_keep);

    std::vector<int> env_offsets(ix.env_total);
    for (int e = 0; e < ix.env_total; ++e) {
        env_offsets[e] = unflatten_offset(e, ix.env_dims, ix.env_strides);
    }
    std::vector<int> keep_offsets(ix.keep_total);
    for (int k = 0; k < ix.keep_total; ++k) {
        keep_offsets[k] = unflatten_offset(k, ix.keep_dims, ix.keep_strides);
    }

    DenseMatrix out = DenseMatrix::Zero(ix.keep_total, ix.keep_total);
    for (int i = 0; i < ix.keep_total; ++i) {
        for (int j = 0; j < ix.keep_total; ++j) {
            Complex acc = 0.0;
            for (int e = 0; e < ix.env_total; ++e) {
                acc += rho.entries(keep_offsets[i] + env_offsets[e],
                                   keep_offsets[j] + env_offsets[e]);
            }
            out(i, j) = acc;
        }
    }
    return DensityMatrix{SpaceLayout(ix.keep_dims), std::move(out)};
}

Complex expectation(const StateVector& psi, const LinearOperator& op) {
    if (op.layout().total_dim() != psi.layout.total_dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("expectation: state is not normalized");
    }
    const Complex value = psi.amplitudes.dot(op.matrix() * psi.amplitudes);
    if (op.is_hermitian()) {
        if (std::abs(value.imag()) > 1e-10) {
            throw std::runtime_error("expectation: Hermitian operator produced imaginary residue");
        }
        return Complex(value.real(), 0.0);
    }
    return value;
}

StateVector basis_state(const SpaceLayout& layout, const std::vector<int>& indices) {
    if (static_cast<int>(indices.size()) != layout.subsystem_count()) {
        throw std::invalid_argument("basis_state: one index per subsystem required");
    }
    int flat = 0;
    for (int s = 0; s < layout.subsystem_count(); ++s) {
        if (indices[s] < 0 || indices[s] >= layout.dim(s)) {
            throw std::invalid_argument("basis_state: index out of range");
        }
        flat = flat * layout.dim(s) + indices[s];
    }
    Vector amps = Vector::Zero(layout.total_dim());
    amps[flat] = 1.0;
    return StateVector(layout, std::move(amps));
}

StateVector coherent_state(Complex alpha, int fock_dim, double warn_threshold, bool quiet) {
    if (fock_dim < 2) {
        throw std::invalid_argument("coherent_state: Fock dimension must be >= 2");
    }
    Vector amps(fock_dim);
    // c_n = alpha^n / sqrt(n!) up to overall normalization; built iteratively
    // to avoid factorial overflow, renormalized after truncation.
    Complex c = 1.0;
    amps[0] = c;
    for (int n = 1; n < fock_dim; ++n) {
        c *= alpha / std::sqrt(static_cast<double>(n));
        amps[n] = c;
    }
    amps /= amps.norm();
    const double top = std::norm(amps[fock_dim - 1]);
    if (top > warn_threshold && !quiet) {
        std::cerr << "coherent_state: top Fock level carries " << top
                  << " of the norm (threshold " << warn_threshold << "), truncation may bite\n";
    }
    return StateVector(oscillator_layout(fock_dim), std::move(amps));
}

double top_fock_population(const StateVector& psi) {
    const int last = psi.layout.subsystem_count() - 1;
    const int fock_dim = psi.layout.dim(last);
    const int blocks = psi.layout.total_dim() / fock_dim;
    double pop = 0.0;
    for (int b = 0; b < blocks; ++b) {
        pop += std::norm(psi.amplitudes[b * fock_dim + (fock_dim - 1)]);
    }
    return pop;
}

} // namespace cqed::hilbert
