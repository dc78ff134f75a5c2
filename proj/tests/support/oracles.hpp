// Copyright 2026 The promkit Authors
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

// Slow reference implementations used to check the library. None of these call
// into the code they check; they work from the definitions with dense algebra.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "promkit/simulator.hpp"

namespace promkit::testing {

using cplx = std::complex<double>;
using DenseMatrix = std::vector<std::vector<cplx>>;

inline int parity(uint64_t x) {
    return std::popcount(x) & 1;
}

/// V_k = Σ_s (-1)^{k·s} v_s by the double sum.
inline std::vector<double> naive_wht(const std::vector<double> &v) {
    std::vector<double> out(v.size(), 0.0);
    for (size_t k = 0; k < v.size(); k++) {
        for (size_t s = 0; s < v.size(); s++) {
            out[k] += parity(k & s) ? -v[s] : v[s];
        }
    }
    return out;
}

/// (u∗v)_s = Σ_t u_t v_{s⊕t}.
inline std::vector<double> naive_convolve(const std::vector<double> &u, const std::vector<double> &v) {
    std::vector<double> out(u.size(), 0.0);
    for (size_t s = 0; s < u.size(); s++) {
        for (size_t t = 0; t < u.size(); t++) {
            out[s] += u[t] * v[s ^ t];
        }
    }
    return out;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> gaussian_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; col++) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; r++) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) < 1e-300) {
            throw std::runtime_error("gaussian_solve: singular matrix");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (size_t r = 0; r < n; r++) {
            if (r == col) {
                continue;
            }
            double factor = a[r][col] / a[col][col];
            for (size_t k = col; k < n; k++) {
                a[r][k] -= factor * a[col][k];
            }
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (size_t i = 0; i < n; i++) {
        x[i] = b[i] / a[i][i];
    }
    return x;
}

/// Q_{s,f} = q_{s⊕f}.
inline std::vector<std::vector<double>> dense_q(const std::vector<double> &q) {
    std::vector<std::vector<double>> out(q.size(), std::vector<double>(q.size()));
    for (size_t s = 0; s < q.size(); s++) {
        for (size_t f = 0; f < q.size(); f++) {
            out[s][f] = q[s ^ f];
        }
    }
    return out;
}

/// α solving Σ_f α_f q_{s⊕f} = δ_{s0}.
inline std::vector<double> solve_alpha_dense(const std::vector<double> &q) {
    std::vector<double> e0(q.size(), 0.0);
    e0[0] = 1;
    return gaussian_solve(dense_q(q), e0);
}

inline std::vector<double> matvec(const std::vector<std::vector<double>> &a, const std::vector<double> &x) {
    std::vector<double> out(a.size(), 0.0);
    for (size_t i = 0; i < a.size(); i++) {
        for (size_t j = 0; j < x.size(); j++) {
            out[i] += a[i][j] * x[j];
        }
    }
    return out;
}

inline double l1(const std::vector<double> &v) {
    double total = 0;
    for (double x : v) {
        total += std::abs(x);
    }
    return total;
}

/// Outer product with a's bits as the high-order bits of the index.
inline std::vector<double> kron(const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> out;
    for (double x : a) {
        for (double y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

// ---- dense-matrix circuit simulation ------------------------------------------

using Mat2x2 = std::array<std::array<cplx, 2>, 2>;

inline Mat2x2 mul(const Mat2x2 &a, const Mat2x2 &b) {
    Mat2x2 out{};
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            for (int k = 0; k < 2; k++) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

/// exp(-i θ P / 2) = cos(θ/2) I - i sin(θ/2) P.
inline Mat2x2 pauli_rotation(const Mat2x2 &p, double theta) {
    const cplx c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cplx mi(0, -1);
    return {{{c + mi * s * p[0][0], mi * s * p[0][1]}, {mi * s * p[1][0], c + mi * s * p[1][1]}}};
}

inline const Mat2x2 PX{{{0, 1}, {1, 0}}};
inline const Mat2x2 PY{{{0, cplx(0, -1)}, {cplx(0, 1), 0}}};
inline const Mat2x2 PZ{{{1, 0}, {0, -1}}};
inline const Mat2x2 PI2{{{1, 0}, {0, 1}}};

/// 2×2 unitary of a single-qubit gate, built from its textbook definition up to global phase.
inline Mat2x2 reference_matrix(const Gate &g) {
    const double r = 1 / std::sqrt(2.0);
    const double pi = std::acos(-1.0);
    switch (g.kind) {
        case GateKind::I:
            return PI2;
        case GateKind::X:
            return PX;
        case GateKind::Y:
            return PY;
        case GateKind::Z:
            return PZ;
        case GateKind::H:
            return {{{r, r}, {r, -r}}};
        case GateKind::S:
            return {{{1, 0}, {0, cplx(0, 1)}}};
        case GateKind::Sdg:
            return {{{1, 0}, {0, cplx(0, -1)}}};
        case GateKind::T:
            return {{{1, 0}, {0, std::exp(cplx(0, pi / 4))}}};
        case GateKind::Tdg:
            return {{{1, 0}, {0, std::exp(cplx(0, -pi / 4))}}};
        case GateKind::RX:
            return pauli_rotation(PX, g.params[0]);
        case GateKind::RY:
            return pauli_rotation(PY, g.params[0]);
        case GateKind::RZ:
            return pauli_rotation(PZ, g.params[0]);
        case GateKind::U:
            // U(θ,φ,λ) ∝ RZ(φ) RY(θ) RZ(λ).
            return mul(pauli_rotation(PZ, g.params[1]),
                       mul(pauli_rotation(PY, g.params[0]), pauli_rotation(PZ, g.params[2])));
        case GateKind::CX:
            break;
    }
    throw std::invalid_argument("reference_matrix: two-qubit gate");
}

inline int qubit_bit(uint64_t index, int q) {
    return static_cast<int>((index >> q) & 1);
}

/// Full 2^n × 2^n operator of a gate (qubit q is bit q of the index).
inline DenseMatrix dense_gate(const Gate &g, int n) {
    const size_t dim = size_t{1} << n;
    DenseMatrix out(dim, std::vector<cplx>(dim, 0.0));
    if (g.is_two_qubit()) {
        for (size_t j = 0; j < dim; j++) {
            size_t i = qubit_bit(j, g.control) ? j ^ (size_t{1} << g.target) : j;
            out[i][j] = 1;
        }
        return out;
    }
    Mat2x2 u = reference_matrix(g);
    const uint64_t mask = uint64_t{1} << g.target;
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            if ((i & ~mask) == (j & ~mask)) {
                out[i][j] = u[qubit_bit(i, g.target)][qubit_bit(j, g.target)];
            }
        }
    }
    return out;
}

inline std::vector<cplx> apply_dense(const DenseMatrix &a, const std::vector<cplx> &x) {
    std::vector<cplx> out(x.size(), 0.0);
    for (size_t i = 0; i < a.size(); i++) {
        for (size_t j = 0; j < x.size(); j++) {
            out[i] += a[i][j] * x[j];
        }
    }
    return out;
}

inline std::vector<cplx> apply_gates_dense(const GateList &gates, std::vector<cplx> psi, int n) {
    for (const auto &g : gates) {
        psi = apply_dense(dense_gate(g, n), psi);
    }
    return psi;
}

/// Dense operator of an observable.
inline DenseMatrix dense_observable(const Observable &obs, int n) {
    const size_t dim = size_t{1} << n;
    DenseMatrix out(dim, std::vector<cplx>(dim, 0.0));
    if (const auto *p = std::get_if<PauliObservable>(&obs.op)) {
        // Column j maps to a single row; accumulate the per-qubit factors.
        for (size_t j = 0; j < dim; j++) {
            size_t i = j;
            cplx amp = static_cast<double>(p->sign);
            for (int q = 0; q < n; q++) {
                const Mat2x2 *m = nullptr;
                switch (p->letters[q]) {
                    case 'X':
                        m = &PX;
                        break;
                    case 'Y':
                        m = &PY;
                        break;
                    case 'Z':
                        m = &PZ;
                        break;
                    default:
                        break;
                }
                if (m == nullptr) {
                    continue;
                }
                int in = qubit_bit(j, q);
                int outb = (*m)[0][in] != 0.0 ? 0 : 1;
                amp *= (*m)[outb][in];
                if (outb != in) {
                    i ^= size_t{1} << q;
                }
            }
            out[i][j] += amp;
        }
        return out;
    }
    const auto &proj = std::get<ZeroProjector>(obs.op);
    for (size_t i = 0; i < dim; i++) {
        bool zero = true;
        for (int q : proj.qubits) {
            zero &= qubit_bit(i, q) == 0;
        }
        out[i][i] = zero ? 1.0 : 0.0;
    }
    return out;
}

inline double expectation_dense(const DenseMatrix &o, const std::vector<cplx> &psi) {
    auto opsi = apply_dense(o, psi);
    cplx total = 0;
    for (size_t i = 0; i < psi.size(); i++) {
        total += std::conj(psi[i]) * opsi[i];
    }
    return total.real();
}

/// Zeroes amplitudes inconsistent with `outcome` on `qubits` (qubits[0] is the high bit).
inline std::vector<cplx> project_dense(std::vector<cplx> psi, const std::vector<int> &qubits, uint64_t outcome) {
    const int k = static_cast<int>(qubits.size());
    for (size_t i = 0; i < psi.size(); i++) {
        for (int j = 0; j < k; j++) {
            int want = static_cast<int>((outcome >> (k - 1 - j)) & 1);
            if (qubit_bit(i, qubits[j]) != want) {
                psi[i] = 0;
                break;
            }
        }
    }
    return psi;
}

/// T[b][s][s'] by dense simulation of every (true outcome, feedforward outcome) pair.
/// Indexing: T[b][s * dim + s'].
inline std::vector<std::vector<double>> dense_trajectory_tensor(const DynamicCircuit &c) {
    const int n = c.num_qubits;
    int m = 0;
    for (const auto &layer : c.layers) {
        m += static_cast<int>(layer.measured.size());
    }
    const size_t dim = size_t{1} << m;
    std::vector<DenseMatrix> ops;
    for (const auto &obs : c.observables) {
        ops.push_back(dense_observable(obs, n));
    }
    std::vector<std::vector<double>> out(c.observables.size(), std::vector<double>(dim * dim, 0.0));
    std::vector<cplx> init(size_t{1} << n, 0.0);
    init[0] = 1;
    init = apply_gates_dense(c.prep, init, n);
    for (uint64_t s = 0; s < dim; s++) {
        for (uint64_t sp = 0; sp < dim; sp++) {
            auto psi = init;
            int consumed = 0;
            for (const auto &layer : c.layers) {
                const int ml = static_cast<int>(layer.measured.size());
                const int shift = m - consumed - ml;
                const uint64_t mask = (uint64_t{1} << ml) - 1;
                psi = apply_gates_dense(layer.pre, psi, n);
                psi = project_dense(psi, layer.measured, (s >> shift) & mask);
                psi = apply_gates_dense(layer.table[(sp >> shift) & mask], psi, n);
                consumed += ml;
            }
            psi = apply_gates_dense(c.post, psi, n);
            for (size_t b = 0; b < ops.size(); b++) {
                out[b][s * dim + sp] = expectation_dense(ops[b], psi);
            }
        }
    }
    return out;
}

/// Ideal expectation: Σ_s T[b][s][s].
inline std::vector<double> dense_ideal(const std::vector<std::vector<double>> &t) {
    std::vector<double> out;
    for (const auto &tb : t) {
        const size_t dim = static_cast<size_t>(std::llround(std::sqrt(static_cast<double>(tb.size()))));
        double total = 0;
        for (size_t s = 0; s < dim; s++) {
            total += tb[s * dim + s];
        }
        out.push_back(total);
    }
    return out;
}

/// Σ_s Σ_s' q_{s⊕s'} T[b][s][s'⊕f].
inline std::vector<double> dense_masked(
    const std::vector<std::vector<double>> &t, const std::vector<double> &q, uint64_t f) {
    std::vector<double> out;
    const size_t dim = q.size();
    for (const auto &tb : t) {
        double total = 0;
        for (size_t s = 0; s < dim; s++) {
            for (size_t sp = 0; sp < dim; sp++) {
                total += q[s ^ sp] * tb[s * dim + (sp ^ f)];
            }
        }
        out.push_back(total);
    }
    return out;
}

}  // namespace promkit::testing
