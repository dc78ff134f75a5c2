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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "promkit/bitkit.hpp"
#include "promkit/errors.hpp"
#include "promkit/readout/syndrome.hpp"

namespace promkit {

/// One calibration shot. `reported` already has the twirl flip undone.
struct CalibrationRecord {
    BitString prepared;
    BitString reported;
    BitString twirl;
};

/// Estimated syndrome distribution plus the raw counts it came from.
struct Calibration {
    SyndromeDistribution q_hat;
    std::vector<uint64_t> counts;
    uint64_t shots = 0;
};

/// q̂_s = fraction of records with reported ⊕ prepared = s.
inline Calibration calibrate(std::span<const CalibrationRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("calibrate: no records");
    }
    const int m = records.front().prepared.size();
    require_within_cap(m, materialization_cap(), "calibration histogram");
    Calibration out;
    out.counts.assign(size_t{1} << m, 0);
    for (const auto &rec : records) {
        if (rec.prepared.size() != m || rec.reported.size() != m) {
            throw std::invalid_argument("calibrate: records have mixed measurement counts");
        }
        if (rec.twirl.size() != m) {
            throw std::invalid_argument("calibrate: twirl bits do not match measurement count");
        }
        out.counts[(rec.reported ^ rec.prepared).index()]++;
    }
    out.shots = records.size();
    std::vector<double> q(out.counts.size());
    for (size_t s = 0; s < q.size(); s++) {
        q[s] = static_cast<double>(out.counts[s]) / static_cast<double>(out.shots);
    }
    out.q_hat = SyndromeDistribution(q);
    return out;
}

}  // namespace promkit
