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

// Independent reference computations for the unit and acceptance tests.
// Everything here is built from Eigen with explicit tensor products and
// never calls the attack or security modules.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline Mat sx() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat sz() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Vec qubit(int bit, int basis) {
    Vec v(2);
    const double s = 1.0 / std::sqrt(2.0);
    const double sg = bit ? -1.0 : 1.0;
    if (basis == 0) {
        v << (bit ? 0.0 : 1.0), (bit ? 1.0 : 0.0);
    } else if (basis == 1) {
        v << s, sg * s;
    } else {
        v << s, cd(0, sg * s);
    }
    return v;
}

// (1 (x) X^u Z^v) (|00> + |11>)/sqrt 2.
inline Vec bell(int u, int v) {
    Vec phi = Vec::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    Mat op = Mat::Identity(2, 2);
    if (u) op = op * sx();
    if (v) op = op * sz();
    return kron(Mat(Mat::Identity(2, 2)), op) * phi;
}

inline Vec bell_pair(int i) { return kron(bell((i >> 3) & 1, (i >> 2) & 1), bell((i >> 1) & 1, i & 1)); }

inline std::array<double, 16> random_lambda(std::mt19937_64& gen, double sparsity = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, 16> l{};
    double total = 0;
    for (double& v : l) {
        v = u(gen) < sparsity ? 0.0 : u(gen);
        total += v;
    }
    if (total == 0) {
        l[0] = total = 1;
    }
    for (double& v : l) v /= total;
    return l;
}

// Coefficient-sum error rates: pair i in Bell state (u, v) errs in basis b
// iff E_b(u, v) = 1.
inline int e_b(int b, int u, int v) { return b == 0 ? u : b == 1 ? v : (u ^ v); }

inline double r1(const std::array<double, 16>& l, int b) {
    double s = 0;
    for (int i = 0; i < 16; ++i) s += e_b(b, (i >> 3) & 1, (i >> 2) & 1) ? l[i] : 0.0;
    return s;
}
inline double r2(const std::array<double, 16>& l, int b) {
    double s = 0;
    for (int i = 0; i < 16; ++i) s += e_b(b, (i >> 1) & 1, i & 1) ? l[i] : 0.0;
    return s;
}
inline double sjoint(const std::array<double, 16>& l, int b, int bp) {
    double s = 0;
    for (int i = 0; i < 16; ++i) {
        if (e_b(b, (i >> 3) & 1, (i >> 2) & 1) && e_b(bp, (i >> 1) & 1, i & 1)) s += l[i];
    }
    return s;
}

// Eve's conditional state by explicit contraction of the 256-dim
// purification sum sqrt(lambda) |Phi Phi>_{AB} |e> with the measurement
// vector (1/sqrt 2) sum_p |p>|psi^b_x> (X^t Z^{a^t}) |p>|psi^b_y>.
inline Vec contraction(const std::array<double, 16>& l, int b, int x, int y, int a, int t) {
    Vec psi = Vec::Zero(256);
    for (int i = 0; i < 16; ++i) {
        Vec e = Vec::Zero(16);
        e(i) = 1.0;
        psi += std::sqrt(l[i]) * kron(bell_pair(i), e);
    }
    Mat p = Mat::Identity(2, 2);
    if (t) p = p * sx();
    if (a ^ t) p = p * sz();
    Vec phi = Vec::Zero(16);
    for (int k = 0; k < 2; ++k) {
        Vec ket = Vec::Zero(2);
        ket(k) = 1.0;
        phi += kron(kron(ket, qubit(x, b)), kron(Vec(p * ket), qubit(y, b))) / std::sqrt(2.0);
    }
    Mat bra = kron(Mat(phi.adjoint()), Mat(Mat::Identity(16, 16)));
    return bra * psi;
}

}  // namespace oracle
