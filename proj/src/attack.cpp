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
#include "vsue/attack.hpp"

#include <cmath>
#include <string>

#include "vsue/errors.hpp"

namespace vsue::attack {

using qmath::Complex;
using qmath::ComplexMatrix;
using qmath::DensityMatrix;
using qmath::PureState;

namespace {

constexpr double kInvSqrt8 = 0.35355339059327373;  // 1 / (2 sqrt 2)
constexpr double kMassFloor = 1e-14;

void check_bits(std::initializer_list<int> bits) {
    for (int v : bits) {
        if (v != 0 && v != 1) {
            throw DomainError("attack: outcome labels must be bits");
        }
    }
}

double sign(int exponent) { return (exponent & 1) ? -1.0 : 1.0; }

// Projector |x>_A <x| (x) |x'>_B <x'| on one pair in basis b.
ComplexMatrix pair_projector(int basis, int xa, int xb) {
    return qmath::tensor(qmath::basis_state(xa, basis).projector(),
                         qmath::basis_state(xb, basis).projector());
}

// Projector onto "pair disagrees in basis b", Bob's y outcome flipped.
ComplexMatrix pair_error_projector(int basis) {
    const int flip = basis == 2 ? 1 : 0;
    ComplexMatrix p(4);
    for (int x = 0; x < 2; ++x) {
        p += pair_projector(basis, x, x ^ 1 ^ flip);
    }
    return p;
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& op) {
    return (rho.matrix() * op).trace().real();
}

}  // namespace

BellDiagonalState::BellDiagonalState() { coeffs_[0] = 1.0; }

BellDiagonalState::BellDiagonalState(std::span<const double> coeffs) {
    if (coeffs.size() != 16) {
        throw ShapeError("BellDiagonalState: need 16 coefficients");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        if (!(coeffs[i] >= 0.0)) {
            throw DomainError("BellDiagonalState: coefficient " + std::to_string(i) + " is negative");
        }
        coeffs_[i] = coeffs[i];
        total += coeffs[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("BellDiagonalState: coefficients sum to " + std::to_string(total));
    }
}

PureState bell_product_state(std::size_t index) {
    if (index >= 16) {
        throw DomainError("bell_product_state: index must be below 16");
    }
    const int i = static_cast<int>(index);
    return qmath::tensor(qmath::bell_state((i >> 3) & 1, (i >> 2) & 1),
                         qmath::bell_state((i >> 1) & 1, i & 1));
}

DensityMatrix BellDiagonalState::to_density_matrix() const {
    ComplexMatrix m(16);
    for (std::size_t i = 0; i < 16; ++i) {
        if (coeffs_[i] != 0.0) {
            m += bell_product_state(i).projector() * Complex(coeffs_[i]);
        }
    }
    return DensityMatrix(std::move(m));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    ComplexMatrix m(16);
    for (std::size_t k = 0; k < 4; ++k) {
        m += vectors[k].projector() * Complex(values[k]);
    }
    return m;
}

DensityMatrix twirl(const DensityMatrix& rho) {
    if (rho.dim() != 16) {
        throw DomainError("twirl: expected a 16-dim state");
    }
    ComplexMatrix acc(16);
    for (int alpha = 0; alpha < 4; ++alpha) {
        const ComplexMatrix pa = qmath::tensor(qmath::pauli(alpha), qmath::pauli(alpha));
        for (int beta = 0; beta < 4; ++beta) {
            const ComplexMatrix pb = qmath::tensor(qmath::pauli(beta), qmath::pauli(beta));
            const ComplexMatrix u = qmath::tensor(pa, pb);
            acc += u * rho.matrix() * u.adjoint();
        }
    }
    acc *= Complex(1.0 / 16.0);
    return DensityMatrix(std::move(acc), rho.mass());
}

ComplexMatrix bell_basis_matrix(const DensityMatrix& rho) {
    if (rho.dim() != 16) {
        throw DomainError("bell_basis_matrix: expected a 16-dim state");
    }
    ComplexMatrix basis(16);  // column j = Bell product state j
    for (std::size_t j = 0; j < 16; ++j) {
        const PureState v = bell_product_state(j);
        for (std::size_t r = 0; r < 16; ++r) {
            basis(r, j) = v[r];
        }
    }
    return basis.adjoint() * rho.matrix() * basis;
}

double bell_off_diagonal_mass(const DensityMatrix& rho) {
    const ComplexMatrix m = bell_basis_matrix(rho);
    double mass = 0.0;
    for (std::size_t r = 0; r < 16; ++r) {
        for (std::size_t c = 0; c < 16; ++c) {
            if (r != c) {
                mass += std::abs(m(r, c));
            }
        }
    }
    return mass;
}

BellDiagonalState symmetrize(const DensityMatrix& rho) {
    if (rho.dim() != 16) {
        throw DomainError("symmetrize: expected a 16-dim density matrix");
    }
    if (std::abs(rho.mass() - 1.0) > 1e-12) {
        throw DomainError("symmetrize: input must be normalized");
    }
    const ComplexMatrix m = bell_basis_matrix(twirl(rho));
    std::array<double, 16> diag{};
    double total = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        diag[i] = std::max(0.0, m(i, i).real());
        total += diag[i];
    }
    for (double& d : diag) {
        d /= total;
    }
    return BellDiagonalState(diag);
}

ErrorRates error_rates(const DensityMatrix& rho) {
    if (rho.dim() != 16) {
        throw DomainError("error_rates: expected a 16-dim state");
    }
    const ComplexMatrix id4 = ComplexMatrix::identity(4);
    std::array<ComplexMatrix, 3> err;
    for (int b = 0; b < 3; ++b) {
        err[b] = pair_error_projector(b);
    }
    ErrorRates out;
    for (int b = 0; b < 3; ++b) {
        out.r1[b] = expectation(rho, qmath::tensor(err[b], id4));
        out.r2[b] = expectation(rho, qmath::tensor(id4, err[b]));
        for (int bp = 0; bp < 3; ++bp) {
            out.s[b][bp] = expectation(rho, qmath::tensor(err[b], err[bp]));
        }
    }
    return out;
}

ErrorRates error_rates(const BellDiagonalState& state) { return error_rates(state.to_density_matrix()); }

std::array<double, 4> solve_check_a(double beta) {
    if (!(beta >= 0.0 && beta <= 2.0 / 3.0)) {
        throw DomainError("solve_check_a: beta must lie in [0, 2/3]");
    }
    std::array<double, 4> c{};
    for (int i = 0; i < 4; ++i) {
        c[i] = beta / 2.0 + (i == 0 ? 1.0 - 2.0 * beta : 0.0);
    }
    return c;
}

BellDiagonalState solve_check_b(const NoiseParams& noise) {
    if (!(noise.gamma >= 0.0 && noise.gamma <= 2.0 / 3.0)) {
        throw DomainError("solve_check_b: gamma must lie in [0, 2/3]");
    }
    const auto c1 = solve_check_a(noise.beta);
    const auto c2 = solve_check_a(noise.gamma);
    std::array<double, 16> lambda{};
    for (std::size_t i = 0; i < 16; ++i) {
        lambda[i] = c1[i >> 2] * c2[i & 3];
    }
    // Renormalize away rounding so the invariant holds to the last ulp.
    double total = 0.0;
    for (double l : lambda) {
        total += l;
    }
    for (double& l : lambda) {
        l /= total;
    }
    return BellDiagonalState(lambda);
}

PureState eve_conditional_state(const BellDiagonalState& state, int b, int x, int y, int a, int t) {
    check_bits({b, x, y, a, t});
    std::vector<Complex> amp(16, 0.0);
    for (int a1 = 0; a1 < 2; ++a1) {
        for (int b1 = 0; b1 < 2; ++b1) {
            for (int a2 = 0; a2 < 2; ++a2) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    const std::size_t i = bell_index(a1, b1, a2, b2);
                    double term = 0.0;
                    if (b == 0) {
                        if ((x ^ y ^ t) == (a1 ^ a2)) {
                            term = sign((b1 + b2 + a + t) * (a1 + x));
                        }
                    } else if ((b1 ^ b2) == (x ^ y ^ a ^ t)) {
                        term = sign(x * a1 + y * (t + a2));
                    }
                    amp[i] = std::sqrt(state[i]) * sign(b2 * t) * term * kInvSqrt8;
                }
            }
        }
    }
    return PureState(std::move(amp), qmath::NormFlag::sub_normalized);
}

std::optional<PureState> eve_conditional_state_normalized(const BellDiagonalState& state, int b,
                                                          int x, int y, int a, int t) {
    const PureState psi = eve_conditional_state(state, b, x, y, a, t);
    if (psi.norm2() <= kMassFloor) {
        return std::nullopt;
    }
    return psi.normalized();
}

double outcome_probability(const BellDiagonalState& state, int b, int x, int y, int a, int t) {
    check_bits({b, x, y, a, t});
    double sum = 0.0;
    for (int a1 = 0; a1 < 2; ++a1) {
        for (int b1 = 0; b1 < 2; ++b1) {
            if (b == 0) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    sum += state.coeff(a1, b1, a1 ^ x ^ y ^ t, b2);
                }
            } else {
                for (int a2 = 0; a2 < 2; ++a2) {
                    sum += state.coeff(a1, b1, a2, b1 ^ x ^ y ^ a ^ t);
                }
            }
        }
    }
    return sum / 8.0;
}

DensityMatrix eve_avg_y_state(const BellDiagonalState& state, int b, int x, int a, int t) {
    ComplexMatrix m(16);
    for (int y = 0; y < 2; ++y) {
        m += eve_conditional_state(state, b, x, y, a, t).projector();
    }
    m *= Complex(8.0);  // divide by P_{xat|b} = 1/8
    return DensityMatrix(std::move(m));
}

DensityMatrix eve_avg_xy_density(const BellDiagonalState& state, int b, int a, int t) {
    ComplexMatrix m(16);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            m += eve_conditional_state(state, b, x, y, a, t).projector();
        }
    }
    m *= Complex(4.0);  // divide by P_{at|b} = 1/4
    return DensityMatrix(std::move(m));
}

std::array<double, 4> lambda_uv(const BellDiagonalState& state) {
    std::array<double, 4> big{};
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    big[2 * u + v] += state.coeff(k, l, k ^ u, l ^ v);
                }
            }
        }
    }
    return big;
}

SpectralDecomposition eve_avg_xy_state(const BellDiagonalState& state, int b, int a, int t) {
    check_bits({b, a, t});
    SpectralDecomposition out;
    out.values = lambda_uv(state);
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            const std::size_t uv = static_cast<std::size_t>(2 * u + v);
            std::vector<Complex> amp(16, 0.0);
            if (out.values[uv] <= kMassFloor) {
                amp[bell_index(0, 0, u, v)] = 1.0;
            } else {
                const double scale = 1.0 / std::sqrt(out.values[uv]);
                for (int k = 0; k < 2; ++k) {
                    for (int l = 0; l < 2; ++l) {
                        const std::size_t i = bell_index(k, l, k ^ u, l ^ v);
                        amp[i] = scale * std::sqrt(state[i]) * sign((a + v) * (1 - k)) * sign(t * (k + l));
                    }
                }
            }
            out.vectors[uv] = PureState(std::move(amp));
        }
    }
    return out;
}

DensityMatrix eve_marginal_state(const BellDiagonalState& state) {
    return DensityMatrix(ComplexMatrix::diagonal(state.coeffs()));
}

}  // namespace vsue::attack
