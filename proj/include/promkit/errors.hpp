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
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace promkit {

/// A readout channel whose symmetrized matrix has an eigenvalue too close to zero to invert.
class SingularChannel : public std::runtime_error {
   public:
    SingularChannel(uint64_t k, double lambda, int layer = -1)
        : std::runtime_error(describe(k, lambda, layer)), k_(k), lambda_(lambda), layer_(layer) {
    }

    /// Index of the offending eigenvalue.
    uint64_t index() const {
        return k_;
    }

    double eigenvalue() const {
        return lambda_;
    }

    /// Layer (or factor) the eigenvalue belongs to, -1 for an unstructured channel.
    int layer() const {
        return layer_;
    }

   private:
    static std::string describe(uint64_t k, double lambda, int layer) {
        std::string out = "singular readout channel: |lambda_" + std::to_string(k) + "| = " +
                          std::to_string(lambda < 0 ? -lambda : lambda) + " is below the inversion threshold";
        if (layer >= 0) {
            out += " (layer " + std::to_string(layer) + ")";
        }
        return out;
    }

    uint64_t k_;
    double lambda_;
    int layer_;
};

/// A dense 2^m (or 2^n) object was requested beyond the configured size cap.
class SizeCapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A perturbation bound was requested outside the region where it holds (2ξd ≥ 1).
class BoundInapplicable : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Largest m for which a full 2^m vector may be materialized. PROMKIT_SIZE_CAP overrides the default of 20.
inline int materialization_cap() {
    const char *env = std::getenv("PROMKIT_SIZE_CAP");
    if (env == nullptr || *env == '\0') {
        return 20;
    }
    char *end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 0 || value > 62) {
        throw std::invalid_argument("PROMKIT_SIZE_CAP must be an integer in [0, 62]");
    }
    return static_cast<int>(value);
}

inline void require_within_cap(int m, int cap, const char *what) {
    if (m > cap) {
        throw SizeCapExceeded(
            std::string(what) + " needs 2^" + std::to_string(m) + " entries, above the cap of 2^" +
            std::to_string(cap));
    }
}

}  // namespace promkit
