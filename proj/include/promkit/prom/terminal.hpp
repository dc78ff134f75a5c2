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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/errors.hpp"
#include "promkit/prom/weights.hpp"
#include "promkit/readout.hpp"

namespace promkit {

/// Euclidean-closest non-negative vector with the same total.
///
/// Negative mass is spread evenly over the surviving entries, smallest first,
/// until every entry is non-negative. A non-positive total yields all zeros.
inline std::vector<double> project_nonnegative(std::span<const double> c) {
    std::vector<double> out(c.begin(), c.end());
    for (double x : out) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("project_nonnegative: non-finite entry");
        }
    }
    double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (total <= 0) {
        std::fill(out.begin(), out.end(), 0.0);
        return out;
    }
    std::vector<size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return out[a] > out[b]; });
    size_t survivors = out.size();
    double carried = 0;
    while (survivors > 0) {
        size_t i = order[survivors - 1];
        if (out[i] + carried / static_cast<double>(survivors) >= 0) {
            break;
        }
        carried += out[i];
        out[i] = 0;
        survivors--;
    }
    double share = carried / static_cast<double>(survivors);
    for (size_t j = 0; j < survivors; j++) {
        out[order[j]] += share;
    }
    return out;
}

/// Q⁻¹c = fwht(fwht(c)/λ)/2^m without projection; may contain negative entries.
inline std::vector<double> invert_counts(
    std::span<const double> c, const SyndromeDistribution &q, double lambda_min = DEFAULT_LAMBDA_MIN) {
    if (c.size() != q.size()) {
        throw std::invalid_argument("terminal_rem: counts and channel sizes differ");
    }
    EigenSpectrum spectrum = eigenvalues(q);
    std::vector<double> out(c.begin(), c.end());
    fwht(out);
    for (size_t k = 0; k < out.size(); k++) {
        double lambda = spectrum.lambda[k];
        if (!(std::abs(lambda) > lambda_min)) {
            throw SingularChannel(k, lambda);
        }
        out[k] /= lambda;
    }
    fwht(out);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (double &x : out) {
        x *= scale;
    }
    return out;
}

/// Terminal readout mitigation of a counts vector followed by non-negative projection.
inline std::vector<double> terminal_rem(std::span<const double> c, const SyndromeDistribution &q) {
    return project_nonnegative(invert_counts(c, q));
}

}  // namespace promkit
