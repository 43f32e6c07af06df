// Copyright 2026 The vsue-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Dense complex linear algebra for the small (dim <= 64) quantum objects of
// the protocol analysis. Everything here is a value type; operations are pure.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vsue::qmath {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxTensorDim = 64;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kNegativeEigTol = 1e-10;

/// Square complex matrix stored row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t dim() const { return dim_; }
    std::span<const Complex> entries() const { return entries_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// Largest entry modulus.
    double max_abs() const;
    /// max |M - M^dagger| entry.
    double hermiticity_defect() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

enum class NormFlag { normalized, sub_normalized };

/// State vector. A sub-normalized state carries its squared norm as probability mass.
class PureState {
public:
    PureState() = default;
    PureState(std::vector<Complex> amplitudes, NormFlag flag = NormFlag::normalized);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    NormFlag norm_flag() const { return flag_; }

    double norm2() const;
    /// <this|other>
    Complex inner(const PureState& other) const;
    /// |psi><psi| (unnormalized if the state is sub-normalized).
    ComplexMatrix projector() const;
    /// Rescaled copy with unit norm; throws DomainError when the mass is ~0.
    PureState normalized() const;

private:
    std::vector<Complex> amplitudes_;
    NormFlag flag_ = NormFlag::normalized;
};

/// Hermitian positive semi-definite matrix with fixed trace (1, unless
/// constructed as sub-normalized with a stated mass).
class DensityMatrix {
public:
    /// Validates hermiticity, trace and PSD; throws DomainError on failure.
    explicit DensityMatrix(ComplexMatrix m, double mass = 1.0);
    static DensityMatrix from_pure(const PureState& psi);

    std::size_t dim() const { return matrix_.dim(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    double mass() const { return mass_; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

private:
    ComplexMatrix matrix_;
    double mass_;
};

struct EigenDecomposition {
    std::vector<double> values;   // descending
    ComplexMatrix vectors;         // column i pairs with values[i]
};

/// 2x2 Pauli matrix: 0 = identity, 1 = X, 2 = Y, 3 = Z.
ComplexMatrix pauli(int index);

/// Qubit state encoding bit in basis 0 = z, 1 = x, 2 = y.
PureState basis_state(int bit, int basis);

/// (1 (x) X^u Z^v)|Phi00>.
PureState bell_state(int u, int v);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                     std::size_t max_dim = kMaxTensorDim);
PureState tensor(const PureState& a, const PureState& b, std::size_t max_dim = kMaxTensorDim);

/// Reduced state on the subsystems listed in keep (subsystem 0 is the most
/// significant tensor factor).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
EigenDecomposition eig_hermitian(const ComplexMatrix& m);
EigenDecomposition eig_hermitian(const DensityMatrix& rho);

/// Von Neumann entropy in bits. Eigenvalues in [-1e-10, 0) count as zero.
double von_neumann_entropy(const DensityMatrix& rho);

/// Trace distance: half the sum of |eigenvalues| of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// U rho U^dagger, returned as a density matrix.
DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& unitary);

}  // namespace vsue::qmath
