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

// Collective attack on two EPR pairs: Pauli twirl, the Bell-diagonal
// coefficients it leaves behind, monitoring-constraint solutions and Eve's
// conditional states.
//
// Ordering convention: the 16-dim Alice-Bob space is A1 B1 A2 B2 and a Bell
// coefficient lambda^{a1 b1}_{a2 b2} (pair 1 in |Phi_{a1 b1}>, pair 2 in
// |Phi_{a2 b2}>) sits at index a1*8 + b1*4 + a2*2 + b2. Eve's purification
// basis |e^{a1 b1}_{a2 b2}> is the computational basis under the same index.

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "vsue/qmath.hpp"

namespace vsue::attack {

constexpr std::size_t bell_index(int a1, int b1, int a2, int b2) {
    return static_cast<std::size_t>((a1 << 3) | (b1 << 2) | (a2 << 1) | b2);
}

/// E_b(u, v): does Bell state Phi_uv show an error in basis b (z, x, y)?
/// The y-basis anticorrelation of Phi_00 is already folded in.
constexpr int basis_error(int basis, int u, int v) {
    return basis == 0 ? u : basis == 1 ? v : (u ^ v);
}

class BellDiagonalState {
public:
    /// Pure |Phi00>|Phi00>.
    BellDiagonalState();
    /// Validates sum = 1 within 1e-12 and nonnegativity.
    explicit BellDiagonalState(std::span<const double> coeffs);

    double operator[](std::size_t index) const { return coeffs_[index]; }
    double coeff(int a1, int b1, int a2, int b2) const { return coeffs_[bell_index(a1, b1, a2, b2)]; }
    const std::array<double, 16>& coeffs() const { return coeffs_; }

    /// Sum_{a1 b1 a2 b2} lambda |Phi Phi><Phi Phi| in the computational basis.
    qmath::DensityMatrix to_density_matrix() const;

private:
    std::array<double, 16> coeffs_{};
};

struct NoiseParams {
    double beta = 0.0;
    double gamma = 0.0;
};

/// Spectrum of Eve's state averaged over x and y, for fixed (b, a, t).
/// Index uv = 2u + v.
struct SpectralDecomposition {
    std::array<double, 4> values{};
    /// Unit vectors. When values[uv] vanishes the vector is |e^{00}_{uv}>,
    /// which keeps the four vectors orthonormal.
    std::array<qmath::PureState, 4> vectors;

    qmath::ComplexMatrix reconstruct() const;
};

/// |Phi_{a1 b1}> (x) |Phi_{a2 b2}> for the given Bell index.
qmath::PureState bell_product_state(std::size_t index);

/// Average of (s_a (x) s_a (x) s_a' (x) s_a') rho (...)^dagger over the 16 Pauli pairs.
qmath::DensityMatrix twirl(const qmath::DensityMatrix& rho);
/// rho expressed in the Bell (x) Bell basis, entry (i, j) = <i|rho|j>.
qmath::ComplexMatrix bell_basis_matrix(const qmath::DensityMatrix& rho);
/// Sum of |entries| off the diagonal of bell_basis_matrix(rho).
double bell_off_diagonal_mass(const qmath::DensityMatrix& rho);
/// Bell-basis diagonal of the twirled state. Throws DomainError unless rho is
/// a 16-dim density matrix.
BellDiagonalState symmetrize(const qmath::DensityMatrix& rho);

struct ErrorRates {
    std::array<double, 3> r1{};                  // channel 1, per basis
    std::array<double, 3> r2{};                  // channel 2, per basis
    std::array<std::array<double, 3>, 3> s{};    // joint flips, [b][b']
};

/// Error probabilities obtained by measuring test projectors on the 16-dim
/// state: r_i(b) = Pr[both halves of pair i disagree in basis b], with the
/// y-basis outcome on Bob's side flipped.
ErrorRates error_rates(const qmath::DensityMatrix& rho);
ErrorRates error_rates(const BellDiagonalState& state);

/// Marginal coefficients c^{a1 b1} (index 2*a1 + b1) forced by r_1(b) = beta for all b.
std::array<double, 4> solve_check_a(double beta);
/// The unique state with r_1 = beta, r_2 = gamma and s = beta*gamma in every basis pair.
BellDiagonalState solve_check_b(const NoiseParams& noise);

/// Sub-normalized |psi^E_{bxyat}>: Eve's state after Alice and Bob obtain
/// outcomes (x, y, a, t) in basis b. Its squared norm is P_{xyat|b}.
qmath::PureState eve_conditional_state(const BellDiagonalState& state, int b, int x, int y, int a,
                                       int t);
/// Normalized version, or nullopt when the outcome has probability <= 1e-14.
std::optional<qmath::PureState> eve_conditional_state_normalized(const BellDiagonalState& state,
                                                                 int b, int x, int y, int a, int t);

/// P_{xyat|b} from the coefficient sums.
double outcome_probability(const BellDiagonalState& state, int b, int x, int y, int a, int t);

/// sigma^E_{bxat} = sum_y Pr[y | b x a t] sigma^E_{bxyat}.
qmath::DensityMatrix eve_avg_y_state(const BellDiagonalState& state, int b, int x, int a, int t);
/// sigma^E_{bat} by direct averaging over x and y.
qmath::DensityMatrix eve_avg_xy_density(const BellDiagonalState& state, int b, int a, int t);
/// Closed-form spectral decomposition of sigma^E_{bat}.
SpectralDecomposition eve_avg_xy_state(const BellDiagonalState& state, int b, int a, int t);
/// Lambda_uv = sum_{k l} lambda^{k l}_{k^u, l^v}.
std::array<double, 4> lambda_uv(const BellDiagonalState& state);
/// Eve's unconditioned state, diag(lambda) in the e-basis.
qmath::DensityMatrix eve_marginal_state(const BellDiagonalState& state);

}  // namespace vsue::attack
