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
#include "vsue/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vsue/errors.hpp"

namespace vsue::qmath {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
        throw ShapeError("ComplexMatrix: entry count is not dim^2");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : entries_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    double m = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) {
        throw ShapeError("ComplexMatrix: dimension mismatch in +");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) {
        throw ShapeError("ComplexMatrix: dimension mismatch in -");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("ComplexMatrix: dimension mismatch in *");
    }
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

PureState::PureState(std::vector<Complex> amplitudes, NormFlag flag)
    : amplitudes_(std::move(amplitudes)), flag_(flag) {
    if (amplitudes_.empty()) {
        throw ShapeError("PureState: empty amplitude vector");
    }
    if (flag_ == NormFlag::normalized && std::abs(norm2() - 1.0) > 1e-12) {
        throw DomainError("PureState: normalized state has norm^2 " + std::to_string(norm2()));
    }
}

double PureState::norm2() const {
    double s = 0.0;
    for (const auto& z : amplitudes_) {
        s += std::norm(z);
    }
    return s;
}

Complex PureState::inner(const PureState& other) const {
    if (other.dim() != dim()) {
        throw ShapeError("PureState::inner: dimension mismatch");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return s;
}

ComplexMatrix PureState::projector() const {
    ComplexMatrix m(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            m(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
        }
    }
    return m;
}

PureState PureState::normalized() const {
    const double n2 = norm2();
    if (n2 <= 1e-28) {
        throw DomainError("PureState::normalized: zero-mass state");
    }
    std::vector<Complex> a = amplitudes_;
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& z : a) {
        z *= scale;
    }
    return PureState(std::move(a), NormFlag::normalized);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double mass) : matrix_(std::move(m)), mass_(mass) {
    if (matrix_.dim() == 0) {
        throw ShapeError("DensityMatrix: empty matrix");
    }
    if (matrix_.hermiticity_defect() > kHermitianTol) {
        throw DomainError("DensityMatrix: matrix is not Hermitian");
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr.real() - mass_) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
        throw DomainError("DensityMatrix: trace " + std::to_string(tr.real()) +
                          " differs from mass " + std::to_string(mass_));
    }
    const auto eig = eig_hermitian(matrix_);
    if (eig.values.back() < -kNegativeEigTol) {
        throw DomainError("DensityMatrix: negative eigenvalue " + std::to_string(eig.values.back()));
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.projector(), psi.norm2());
}

ComplexMatrix pauli(int index) {
    using namespace std::complex_literals;
    switch (index) {
        case 0:
            return ComplexMatrix(2, {1.0, 0.0, 0.0, 1.0});
        case 1:
            return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
        case 2:
            return ComplexMatrix(2, {0.0, -1.0i, 1.0i, 0.0});
        case 3:
            return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
        default:
            throw DomainError("pauli: index must be in 0..3");
    }
}

PureState basis_state(int bit, int basis) {
    using namespace std::complex_literals;
    if (bit != 0 && bit != 1) {
        throw DomainError("basis_state: bit must be 0 or 1");
    }
    const double r = 1.0 / std::sqrt(2.0);
    const double sign = bit ? -1.0 : 1.0;
    switch (basis) {
        case 0:
            return bit ? PureState({0.0, 1.0}) : PureState({1.0, 0.0});
        case 1:
            return PureState({r, sign * r});
        case 2:
            return PureState({r, sign * r * 1.0i});
        default:
            throw DomainError("basis_state: basis must be 0 (z), 1 (x) or 2 (y)");
    }
}

PureState bell_state(int u, int v) {
    if ((u != 0 && u != 1) || (v != 0 && v != 1)) {
        throw DomainError("bell_state: u, v must be bits");
    }
    // (|0,u> + (-1)^v |1,~u>)/sqrt2 in the |q0 q1> ordering.
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<Complex> a(4, 0.0);
    a[static_cast<std::size_t>(u)] = r;
    a[static_cast<std::size_t>(2 + (1 - u))] = v ? -r : r;
    return PureState(std::move(a));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_dim) {
    const std::size_t n = a.dim() * b.dim();
    if (n > max_dim) {
        throw SizeError("tensor: dimension " + std::to_string(n) + " exceeds limit");
    }
    ComplexMatrix out(n);
    for (std::size_t ar = 0; ar < a.dim(); ++ar) {
        for (std::size_t ac = 0; ac < a.dim(); ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < b.dim(); ++br) {
                for (std::size_t bc = 0; bc < b.dim(); ++bc) {
                    out(ar * b.dim() + br, ac * b.dim() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

PureState tensor(const PureState& a, const PureState& b, std::size_t max_dim) {
    const std::size_t n = a.dim() * b.dim();
    if (n > max_dim) {
        throw SizeError("tensor: dimension " + std::to_string(n) + " exceeds limit");
    }
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    const bool normalized =
        a.norm_flag() == NormFlag::normalized && b.norm_flag() == NormFlag::normalized;
    return PureState(std::move(out), normalized ? NormFlag::normalized : NormFlag::sub_normalized);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (dims.empty() || total != rho.dim()) {
        throw ShapeError("partial_trace: subsystem dims do not multiply to rho.dim");
    }
    if (keep.empty()) {
        throw ShapeError("partial_trace: keep set is empty");
    }
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size() || kept[k]) {
            throw ShapeError("partial_trace: invalid keep index");
        }
        kept[k] = true;
    }

    // Mixed-radix digits of each global index, subsystem 0 most significant.
    const std::size_t ns = dims.size();
    std::vector<std::size_t> strides(ns, 1);
    for (std::size_t s = ns - 1; s-- > 0;) {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    std::size_t kept_dim = 1;
    for (std::size_t s = 0; s < ns; ++s) {
        if (kept[s]) {
            kept_dim *= dims[s];
        }
    }
    auto split = [&](std::size_t index, std::size_t& kept_index, std::size_t& traced_index) {
        kept_index = 0;
        traced_index = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            const std::size_t digit = (index / strides[s]) % dims[s];
            if (kept[s]) {
                kept_index = kept_index * dims[s] + digit;
            } else {
                traced_index = traced_index * dims[s] + digit;
            }
        }
    };

    std::vector<std::size_t> kept_of(total), traced_of(total);
    for (std::size_t i = 0; i < total; ++i) {
        split(i, kept_of[i], traced_of[i]);
    }
    ComplexMatrix out(kept_dim);
    for (std::size_t r = 0; r < total; ++r) {
        for (std::size_t c = 0; c < total; ++c) {
            if (traced_of[r] == traced_of[c]) {
                out(kept_of[r], kept_of[c]) += rho(r, c);
            }
        }
    }
    return DensityMatrix(std::move(out), rho.mass());
}

EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
    if (m.hermiticity_defect() > kHermitianTol * std::max(1.0, m.max_abs())) {
        throw DomainError("eig_hermitian: matrix is not Hermitian");
    }
    const std::size_t n = m.dim();
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    // Symmetrize away rounding asymmetry.
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = a(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }
    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = r + 1; c < n; ++c) {
                s += std::norm(a(r, c));
            }
        }
        return std::sqrt(s);
    };
    const double scale = std::max(1.0, a.max_abs());
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_mass() > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r_pq = std::abs(a(p, q));
                if (r_pq < 1e-300) {
                    continue;
                }
                // Phase column/row q so that a(p, q) becomes real positive.
                const Complex w = std::conj(a(p, q)) / r_pq;
                for (std::size_t k = 0; k < n; ++k) {
                    a(k, q) *= w;
                    v(k, q) *= w;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    a(q, k) *= std::conj(w);
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * r_pq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    if (off_mass() > 1e-12 * scale) {
        throw NumericalFailure("eig_hermitian: Jacobi sweeps did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

EigenDecomposition eig_hermitian(const DensityMatrix& rho) {
    return eig_hermitian(rho.matrix());
}

double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (double lam : eig_hermitian(rho).values) {
        if (lam < -kNegativeEigTol) {
            throw DomainError("von_neumann_entropy: eigenvalue below PSD slack");
        }
        if (lam > 0.0) {
            s -= lam * std::log2(lam);
        }
    }
    return std::max(0.0, s);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("trace_distance: dimension mismatch");
    }
    double s = 0.0;
    for (double lam : eig_hermitian(a.matrix() - b.matrix()).values) {
        s += std::abs(lam);
    }
    return 0.5 * s;
}

DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& unitary) {
    ComplexMatrix m = unitary * rho.matrix() * unitary.adjoint();
    // Remove rounding asymmetry so the result validates as Hermitian.
    ComplexMatrix h = m + m.adjoint();
    h *= 0.5;
    return DensityMatrix(std::move(h), rho.mass());
}

}  // namespace vsue::qmath
