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

#include <bit>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace promkit {

/// Returns m such that size == 2^m, or throws.
inline int log2_exact(size_t size) {
    if (size == 0 || !std::has_single_bit(size)) {
        throw std::invalid_argument("length " + std::to_string(size) + " is not a power of two");
    }
    return std::countr_zero(size);
}

/// In-place unnormalized Walsh-Hadamard transform: v_k <- Σ_s (-1)^{k·s} v_s.
///
/// Applying it twice multiplies by 2^m.
inline void fwht(std::span<double> v) {
    log2_exact(v.size());
    const size_t n = v.size();
    for (size_t half = 1; half < n; half <<= 1) {
        for (size_t block = 0; block < n; block += half << 1) {
            for (size_t i = block; i < block + half; i++) {
                double a = v[i];
                double b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
    }
}

/// Out-of-place convenience wrapper around fwht.
inline std::vector<double> fwht_copy(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht(out);
    return out;
}

/// (u * v)_s = Σ_t u_t v_{s⊕t}, computed through the transform.
inline std::vector<double> binary_convolve(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("binary_convolve: length mismatch");
    }
    int m = log2_exact(u.size());
    std::vector<double> a = fwht_copy(u);
    std::vector<double> b = fwht_copy(v);
    for (size_t k = 0; k < a.size(); k++) {
        a[k] *= b[k];
    }
    fwht(a);
    double scale = 1.0 / static_cast<double>(size_t{1} << m);
    for (double &x : a) {
        x *= scale;
    }
    return a;
}

}  // namespace promkit
