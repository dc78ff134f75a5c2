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
#include <stdexcept>
#include <string>

#include "promkit/errors.hpp"
#include "promkit/prom/weights.hpp"
#include "promkit/readout.hpp"

namespace promkit {

inline void check_eta(double eta) {
    if (!(eta >= 0 && eta < 0.5)) {
        throw std::domain_error("total error probability must lie in [0, 0.5), got " + std::to_string(eta));
    }
}

/// 1/(1-2η). Upper bound on ξ, attained at m = 1.
inline double overhead_bound(double eta) {
    check_eta(eta);
    return 1 / (1 - 2 * eta);
}

/// ceil(ξ²N): noisy shots matching the precision of N noiseless ones.
inline uint64_t shot_budget(uint64_t n, double xi) {
    if (n == 0) {
        throw std::invalid_argument("shot_budget needs at least one shot");
    }
    double x = xi * xi * static_cast<double>(n);
    double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * x) {
        return static_cast<uint64_t>(nearest);
    }
    return static_cast<uint64_t>(std::ceil(x));
}

struct SensitivityBounds {
    double expval_bound = 0;
    double xi_bound = 0;
    double distance = 0;
    double xi = 1;
};

/// Worst-case change in the mitigated expectation and in ξ when weights are solved for q' instead of q.
inline SensitivityBounds sensitivity_bounds(
    const SyndromeDistribution &q, const SyndromeDistribution &q_prime, double observable_norm) {
    SensitivityBounds out;
    out.distance = total_variation(q, q_prime);
    out.xi = solve_weights_general(q).xi();
    double g = 2 * out.xi * out.distance;
    if (!(g < 1)) {
        throw BoundInapplicable("sensitivity bound requires 2*xi*d < 1, got " + std::to_string(g));
    }
    out.xi_bound = 2 * out.xi * out.xi * out.distance / (1 - g);
    out.expval_bound = out.xi_bound * observable_norm;
    return out;
}

/// 2η/(1-2η)·‖O‖₂: worst-case bias with no mitigation.
inline double raw_error_bound(double eta, double observable_norm) {
    check_eta(eta);
    return 2 * eta / (1 - 2 * eta) * observable_norm;
}

}  // namespace promkit
