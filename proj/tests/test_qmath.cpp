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
#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "vsue/errors.hpp"
#include "vsue/qmath.hpp"
#include "vsue/rng.hpp"

using namespace vsue;
using namespace vsue::qmath;

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix random_psd(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            g(r, c) = Complex(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
        }
    }
    ComplexMatrix m = g * g.adjoint();
    return m * Complex(1.0 / m.trace().real());
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Pauli, AlgebraAndRange) {
    EXPECT_LT(max_diff(pauli(0), ComplexMatrix::identity(2)), 1e-15);
    EXPECT_LT(max_diff(pauli(1) * pauli(1), ComplexMatrix::identity(2)), 1e-15);
    // Direct 2x2 product: X Z = [[0,-1],[1,0]] = -i Y.
    const ComplexMatrix xz(2, {0.0, -1.0, 1.0, 0.0});
    EXPECT_LT(max_diff(pauli(1) * pauli(3), xz), 1e-15);
    EXPECT_LT(max_diff(pauli(1) * pauli(3), -I * pauli(2)), 1e-15);
    EXPECT_THROW(pauli(4), DomainError);
    EXPECT_THROW(pauli(-1), DomainError);
}

TEST(BasisStates, ValuesAndOrthogonality) {
    EXPECT_NEAR(std::abs(basis_state(0, 0)[0] - 1.0), 0.0, 1e-15);
    const PureState m = basis_state(1, 1);
    EXPECT_NEAR(std::abs(m[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m[1] + 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    const PureState yp = basis_state(0, 2);
    EXPECT_NEAR(std::abs(yp[1] - I / std::sqrt(2.0)), 0.0, 1e-15);
    for (int b = 0; b < 3; ++b) {
        EXPECT_NEAR(std::abs(basis_state(0, b).inner(basis_state(1, b))), 0.0, 1e-15);
    }
    EXPECT_THROW(basis_state(2, 0), DomainError);
    EXPECT_THROW(basis_state(0, 3), DomainError);
}

TEST(BellStates, ValuesOrthonormalComplete) {
    const double s = 1.0 / std::sqrt(2.0);
    const PureState p00 = bell_state(0, 0);
    const std::array<double, 4> e00 = {s, 0, 0, s};
    const std::array<double, 4> e10 = {0, s, s, 0};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::abs(p00[i] - e00[i]), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(bell_state(1, 0)[i] - e10[i]), 0.0, 1e-15);
    }
    ComplexMatrix sum(4);
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            sum += bell_state(u, v).projector();
            for (int u2 = 0; u2 < 2; ++u2) {
                for (int v2 = 0; v2 < 2; ++v2) {
                    const double expect = (u == u2 && v == v2) ? 1.0 : 0.0;
                    EXPECT_NEAR(std::abs(bell_state(u, v).inner(bell_state(u2, v2)) - expect), 0.0,
                                1e-12);
                }
            }
        }
    }
    EXPECT_LT(max_diff(sum, ComplexMatrix::identity(4)), 1e-12);
}

TEST(Tensor, DimensionTraceAndLimit) {
    EXPECT_LT(max_diff(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                       ComplexMatrix::identity(4)),
              1e-15);
    EXPECT_EQ(tensor(bell_state(0, 0), bell_state(0, 0)).dim(), 16u);
    Rng rng(3);
    const ComplexMatrix a = random_psd(2, rng) * Complex(2.0, 0.5);
    const ComplexMatrix b = random_psd(4, rng) * Complex(-1.0, 3.0);
    EXPECT_NEAR(std::abs(tensor(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
    EXPECT_THROW(tensor(ComplexMatrix::identity(16), ComplexMatrix::identity(8)), SizeError);
}

TEST(PartialTrace, Marginals) {
    const DensityMatrix phi = DensityMatrix::from_pure(bell_state(0, 0));
    const std::array<std::size_t, 2> dims = {2, 2};
    const std::array<std::size_t, 1> keep0 = {0};
    const std::array<std::size_t, 1> keep1 = {1};
    const DensityMatrix half = partial_trace(phi, dims, keep0);
    EXPECT_LT(max_diff(half.matrix(), ComplexMatrix::identity(2) * Complex(0.5)), 1e-15);
    EXPECT_NEAR(von_neumann_entropy(half), 1.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(partial_trace(phi, dims, keep1)), 1.0, 1e-12);

    Rng rng(11);
    const DensityMatrix rho(random_psd(2, rng));
    const DensityMatrix tau(random_psd(8, rng));
    const DensityMatrix joint(tensor(rho.matrix(), tau.matrix()));
    const std::array<std::size_t, 2> d28 = {2, 8};
    EXPECT_LT(max_diff(partial_trace(joint, d28, keep0).matrix(), rho.matrix()), 1e-13);
    EXPECT_LT(max_diff(partial_trace(joint, d28, keep1).matrix(), tau.matrix()), 1e-13);

    const DensityMatrix big(random_psd(16, rng));
    const std::array<std::size_t, 4> d2222 = {2, 2, 2, 2};
    const std::array<std::size_t, 2> keep13 = {1, 3};
    EXPECT_NEAR(partial_trace(big, d2222, keep13).matrix().trace().real(), 1.0, 1e-12);
    // Element oracle: (rho_13)_{(b1 b3),(b1' b3')} = sum over a0 a2 of rho.
    const DensityMatrix red = partial_trace(big, d2222, keep13);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            Complex acc = 0;
            for (std::size_t a0 = 0; a0 < 2; ++a0) {
                for (std::size_t a2 = 0; a2 < 2; ++a2) {
                    const std::size_t ri = a0 * 8 + (r >> 1) * 4 + a2 * 2 + (r & 1);
                    const std::size_t ci = a0 * 8 + (c >> 1) * 4 + a2 * 2 + (c & 1);
                    acc += big(ri, ci);
                }
            }
            EXPECT_NEAR(std::abs(acc - red(r, c)), 0.0, 1e-14);
        }
    }
    const std::array<std::size_t, 2> bad = {2, 4};
    EXPECT_THROW(partial_trace(big, bad, keep0), ShapeError);
}

TEST(Eigen, ReconstructionAndKnownSpectra) {
    const auto mixed = eig_hermitian(ComplexMatrix::identity(2) * Complex(0.5));
    EXPECT_NEAR(mixed.values[0], 0.5, 1e-15);
    EXPECT_NEAR(mixed.values[1], 0.5, 1e-15);
    const auto proj = eig_hermitian(bell_state(0, 0).projector());
    EXPECT_NEAR(proj.values[0], 1.0, 1e-14);
    for (int i = 1; i < 4; ++i) {
        EXPECT_NEAR(proj.values[i], 0.0, 1e-14);
    }

    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix m = random_psd(16, rng);
        const auto e = eig_hermitian(m);
        ComplexMatrix recon(16);
        for (std::size_t k = 0; k < 16; ++k) {
            for (std::size_t r = 0; r < 16; ++r) {
                for (std::size_t c = 0; c < 16; ++c) {
                    recon(r, c) += e.values[k] * e.vectors(r, k) * std::conj(e.vectors(c, k));
                }
            }
        }
        EXPECT_LT(max_diff(recon, m), 1e-10);
        EXPECT_LT(max_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(16)), 1e-10);
        for (std::size_t k = 1; k < 16; ++k) {
            EXPECT_GE(e.values[k - 1], e.values[k]);
        }
    }

    // Bell-diagonal state: spectrum equals the sorted coefficients.
    std::vector<double> lambda(16);
    double total = 0;
    for (double& l : lambda) {
        l = rng.uniform01();
        total += l;
    }
    ComplexMatrix bd(16);
    for (std::size_t i = 0; i < 16; ++i) {
        lambda[i] /= total;
        const PureState v = tensor(bell_state((i >> 3) & 1, (i >> 2) & 1),
                                   bell_state((i >> 1) & 1, i & 1));
        bd += v.projector() * Complex(lambda[i]);
    }
    std::sort(lambda.rbegin(), lambda.rend());
    const auto e = eig_hermitian(bd);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_NEAR(e.values[i], lambda[i], 1e-12);
    }

    ComplexMatrix nonherm(2, {0.0, 1.0, 0.0, 0.0});
    EXPECT_THROW(eig_hermitian(nonherm), DomainError);
}

TEST(Entropy, ValuesAdditivityInvariance) {
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_pure(basis_state(1, 2))), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(ComplexMatrix::identity(2) * Complex(0.5))), 1.0,
                1e-14);
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> p(2), q(4);
        double sp = 0, sq = 0;
        for (double& x : p) sp += (x = rng.uniform01());
        for (double& x : q) sq += (x = rng.uniform01());
        double hp = 0, hq = 0;
        for (double& x : p) {
            x /= sp;
            hp -= x * std::log2(x);
        }
        for (double& x : q) {
            x /= sq;
            hq -= x * std::log2(x);
        }
        const DensityMatrix rp(ComplexMatrix::diagonal(p));
        const DensityMatrix rq(ComplexMatrix::diagonal(q));
        EXPECT_NEAR(von_neumann_entropy(rp), hp, 1e-12);
        EXPECT_NEAR(von_neumann_entropy(DensityMatrix(tensor(rp.matrix(), rq.matrix()))), hp + hq,
                    1e-10);
    }
    // Unitary invariance with a composed rotation on 4 qubits.
    const double s = 1.0 / std::sqrt(2.0);
    const ComplexMatrix hadamard(2, {s, s, s, -s});
    const ComplexMatrix phase(2, {1.0, 0.0, 0.0, I});
    const ComplexMatrix u1 = hadamard * phase * pauli(1);
    const ComplexMatrix u2 = phase * hadamard * pauli(2);
    const ComplexMatrix u = tensor(tensor(u1, u2), tensor(pauli(3) * hadamard, u1));
    const DensityMatrix rho(random_psd(16, rng));
    EXPECT_NEAR(von_neumann_entropy(conjugate(rho, u)), von_neumann_entropy(rho), 1e-10);
}

TEST(TraceDistance, BasicProperties) {
    Rng rng(13);
    const DensityMatrix a(random_psd(4, rng));
    const DensityMatrix b(random_psd(4, rng));
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
    EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-12);
    const DensityMatrix z0 = DensityMatrix::from_pure(basis_state(0, 0));
    const DensityMatrix z1 = DensityMatrix::from_pure(basis_state(1, 0));
    EXPECT_NEAR(trace_distance(z0, z1), 1.0, 1e-14);
    EXPECT_THROW(trace_distance(a, z0), ShapeError);
}

TEST(DensityMatrix, RejectsInvalid) {
    EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(2)), DomainError);
    const std::vector<double> neg = {1.5, -0.5};
    EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal(neg)), DomainError);
    EXPECT_NO_THROW(DensityMatrix(ComplexMatrix::identity(2) * Complex(0.25), 0.5));
}
