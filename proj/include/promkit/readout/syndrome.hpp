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

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/errors.hpp"

namespace promkit {

/// Probability of reporting t given true outcome s, for m measurements.
class ConfusionMatrix {
   public:
    ConfusionMatrix() = default;

    /// rows[t][s] = M_{ts}. Columns must be probability vectors.
    explicit ConfusionMatrix(const std::vector<std::vector<double>> &rows) {
        dim_ = rows.size();
        num_bits_ = log2_exact(dim_);
        entries_.reserve(dim_ * dim_);
        for (const auto &row : rows) {
            if (row.size() != dim_) {
                throw std::invalid_argument("confusion matrix must be square");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
        for (size_t s = 0; s < dim_; s++) {
            auto col = normalized_distribution(column(s));
            for (size_t t = 0; t < dim_; t++) {
                if (entry(t, s) > 1) {
                    throw std::invalid_argument("confusion matrix entry exceeds 1");
                }
                entries_[t * dim_ + s] = col[t];
            }
        }
    }

    int num_bits() const {
        return num_bits_;
    }

    size_t dim() const {
        return dim_;
    }

    double entry(uint64_t t, uint64_t s) const {
        return entries_[t * dim_ + s];
    }

    std::vector<double> column(uint64_t s) const {
        std::vector<double> out(dim_);
        for (size_t t = 0; t < dim_; t++) {
            out[t] = entries_[t * dim_ + s];
        }
        return out;
    }

   private:
    size_t dim_ = 0;
    int num_bits_ = 0;
    std::vector<double> entries_;
};

/// Syndrome probabilities q over {0,1}^m; the symmetrized readout channel.
class SyndromeDistribution {
   public:
    SyndromeDistribution() : q_{1.0} {
    }

    explicit SyndromeDistribution(std::span<const double> q)
        : q_(normalized_distribution(q)), num_bits_(log2_exact(q.size())) {
        for (double x : q_) {
            if (x > 1) {
                throw std::invalid_argument("syndrome probability exceeds 1");
            }
        }
    }

    explicit SyndromeDistribution(const std::vector<double> &q)
        : SyndromeDistribution(std::span<const double>(q)) {
    }

    SyndromeDistribution(std::initializer_list<double> q)
        : SyndromeDistribution(std::span<const double>(q.begin(), q.size())) {
    }

    static SyndromeDistribution noiseless(int m) {
        require_within_cap(m, materialization_cap(), "noiseless syndrome distribution");
        std::vector<double> q(size_t{1} << m, 0.0);
        q[0] = 1;
        return SyndromeDistribution(q);
    }

    /// Single measurement flipping with probability r.
    static SyndromeDistribution bit_flip(double r) {
        if (!(r >= 0 && r <= 1)) {
            throw std::invalid_argument("flip rate must be in [0, 1]");
        }
        return SyndromeDistribution({1 - r, r});
    }

    int num_bits() const {
        return num_bits_;
    }

    size_t size() const {
        return q_.size();
    }

    double operator[](uint64_t s) const {
        return q_[s];
    }

    double at(const BitString &s) const {
        if (s.size() != num_bits_) {
            throw std::invalid_argument("syndrome length does not match distribution");
        }
        return q_[s.index()];
    }

    const std::vector<double> &probabilities() const {
        return q_;
    }

    /// Total readout error probability 1 - q_0.
    double eta() const {
        return 1 - q_[0];
    }

    bool operator==(const SyndromeDistribution &other) const = default;

   private:
    std::vector<double> q_;
    int num_bits_ = 0;
};

/// Eigenvalues of the symmetrized confusion matrix, indexed by k.
struct EigenSpectrum {
    std::vector<double> lambda;
};

/// q_s = 2^{-m} Σ_t M[t][t⊕s].
inline SyndromeDistribution symmetrize(const ConfusionMatrix &m) {
    const size_t dim = m.dim();
    std::vector<double> q(dim, 0.0);
    for (size_t s = 0; s < dim; s++) {
        double total = 0;
        for (size_t t = 0; t < dim; t++) {
            total += m.entry(t, t ^ s);
        }
        q[s] = total / static_cast<double>(dim);
    }
    return SyndromeDistribution(q);
}

/// λ = fwht(q), with λ_0 pinned to 1.
inline EigenSpectrum eigenvalues(const SyndromeDistribution &q) {
    EigenSpectrum out{q.probabilities()};
    fwht(out.lambda);
    out.lambda[0] = 1;
    return out;
}

/// Q_{sf} = q_{s⊕f}.
inline double q_matrix_entry(const SyndromeDistribution &q, const BitString &s, const BitString &f) {
    if (s.size() != q.num_bits() || f.size() != q.num_bits()) {
        throw std::invalid_argument("q_matrix_entry: bit string length does not match distribution");
    }
    return q[s.index() ^ f.index()];
}

/// Dense Q as row-major 2^m x 2^m. Refused above max_bits.
inline std::vector<double> symmetrized_matrix(const SyndromeDistribution &q, int max_bits = 12) {
    require_within_cap(2 * q.num_bits(), 2 * max_bits, "dense symmetrized confusion matrix");
    const size_t dim = q.size();
    std::vector<double> out(dim * dim);
    for (size_t s = 0; s < dim; s++) {
        for (size_t f = 0; f < dim; f++) {
            out[s * dim + f] = q[s ^ f];
        }
    }
    return out;
}

/// Distribution of the kept syndrome bits; bit j of the result is bit keep[j] of the input.
inline SyndromeDistribution marginalize(const SyndromeDistribution &q, std::span<const int> keep) {
    const int m = q.num_bits();
    if (keep.empty()) {
        throw std::invalid_argument("marginalize: keep set is empty");
    }
    uint64_t seen = 0;
    for (int j : keep) {
        if (j < 0 || j >= m) {
            throw std::invalid_argument("marginalize: bit index " + std::to_string(j) + " out of range");
        }
        if ((seen >> j) & 1) {
            throw std::invalid_argument("marginalize: repeated bit index");
        }
        seen |= uint64_t{1} << j;
    }
    const int k = static_cast<int>(keep.size());
    std::vector<double> out(size_t{1} << k, 0.0);
    for (uint64_t s = 0; s < q.size(); s++) {
        uint64_t r = 0;
        for (int j : keep) {
            r = (r << 1) | static_cast<uint64_t>(index_bit(s, m, j));
        }
        out[r] += q[s];
    }
    return SyndromeDistribution(out);
}

/// Binary outer product; a's bits come first.
inline SyndromeDistribution tensor_product(const SyndromeDistribution &a, const SyndromeDistribution &b) {
    require_within_cap(a.num_bits() + b.num_bits(), materialization_cap(), "tensor product");
    std::vector<double> out(a.size() * b.size());
    for (size_t i = 0; i < a.size(); i++) {
        for (size_t j = 0; j < b.size(); j++) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return SyndromeDistribution(out);
}

/// ½ Σ_s |q_s - q'_s|.
inline double total_variation(const SyndromeDistribution &a, const SyndromeDistribution &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("total_variation: length mismatch");
    }
    double total = 0;
    for (size_t s = 0; s < a.size(); s++) {
        total += std::abs(a[s] - b[s]);
    }
    return total / 2;
}

inline double total_error_probability(const SyndromeDistribution &q) {
    return q.eta();
}

}  // namespace promkit
