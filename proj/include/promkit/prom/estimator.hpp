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
#include <cstdint>
#include <stdexcept>

namespace promkit {

struct Estimate {
    double value = 0;
    double std_error = 0;
    uint64_t shots = 0;
};

/// Running mean and variance of signed single-shot outcomes o = m·sgn(α_f); the estimate is ξ·mean(o).
class EstimatorAccumulator {
   public:
    explicit EstimatorAccumulator(double xi = 1) : xi_(xi) {
        if (!(xi >= 1)) {
            throw std::invalid_argument("accumulator overhead factor must be at least 1");
        }
    }

    void add(double value, int sign = 1) {
        double o = sign < 0 ? -value : value;
        count_++;
        double delta = o - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (o - mean_);
    }

    /// Pairwise combination of running moments, so merged results match a single pass.
    void merge(const EstimatorAccumulator &other) {
        if (other.xi_ != xi_) {
            throw std::invalid_argument("cannot merge accumulators with different overhead factors");
        }
        if (other.count_ == 0) {
            return;
        }
        if (count_ == 0) {
            count_ = other.count_;
            mean_ = other.mean_;
            m2_ = other.m2_;
            return;
        }
        const double na = static_cast<double>(count_), nb = static_cast<double>(other.count_);
        const double n = na + nb;
        const double delta = other.mean_ - mean_;
        mean_ += delta * nb / n;
        m2_ += other.m2_ + delta * delta * na * nb / n;
        count_ += other.count_;
    }

    uint64_t count() const {
        return count_;
    }

    /// Mean of the signed single-shot values, before rescaling by ξ.
    double mean() const {
        return mean_;
    }

    double xi() const {
        return xi_;
    }

    /// Sample variance of the rescaled single-shot values ξ·o.
    double single_shot_variance() const {
        if (count_ < 2) {
            return 0;
        }
        return xi_ * xi_ * m2_ / static_cast<double>(count_ - 1);
    }

    Estimate finalize() const {
        if (count_ == 0) {
            throw std::logic_error("finalize on an empty accumulator");
        }
        return Estimate{xi_ * mean_, std::sqrt(single_shot_variance() / static_cast<double>(count_)), count_};
    }

   private:
    double xi_;
    uint64_t count_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

}  // namespace promkit
