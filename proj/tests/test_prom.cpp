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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "promkit/prom.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

namespace promkit {
namespace {

using testing::Engine;

void expect_alpha(const MitigationWeights &w, const std::vector<double> &expected, double tol) {
    auto a = w.expanded_alpha();
    ASSERT_EQ(a.size(), expected.size());
    for (size_t f = 0; f < a.size(); f++) {
        EXPECT_NEAR(a[f], expected[f], tol) << "f=" << f;
        EXPECT_NEAR(w.alpha(f), expected[f], tol) << "f=" << f;
    }
}

TEST(SolveWeightsGeneral, SingleBitExample) {
    SyndromeDistribution q({0.9, 0.1});
    auto w = solve_weights_general(q);
    // Frozen from the dense linear solve of Q α = e_0.
    auto dense = testing::solve_alpha_dense({0.9, 0.1});
    EXPECT_NEAR(dense[0], 1.125, 1e-14);
    EXPECT_NEAR(dense[1], -0.125, 1e-14);
    expect_alpha(w, {1.125, -0.125}, 1e-14);
    EXPECT_NEAR(w.xi(), 1.25, 1e-14);
    // Closed form for one bit: α_0 = (1 + 1/(1 - 2 q_1)) / 2.
    EXPECT_NEAR(0.5 * (1 + 1 / (1 - 2 * 0.1)), w.alpha(0), 1e-14);
}

TEST(SolveWeightsGeneral, TwoBitProductExample) {
    std::vector<double> qv{0.81, 0.09, 0.09, 0.01};
    auto w = solve_weights_general(SyndromeDistribution(qv));
    std::vector<double> frozen{1.265625, -0.140625, -0.140625, 0.015625};
    auto dense = testing::solve_alpha_dense(qv);
    for (int f = 0; f < 4; f++) {
        EXPECT_NEAR(dense[f], frozen[f], 1e-14);
    }
    expect_alpha(w, frozen, 1e-14);
    EXPECT_NEAR(w.xi(), 1.5625, 1e-14);
}

TEST(SolveWeightsGeneral, NoiselessIsIdentity) {
    auto w = solve_weights_general(SyndromeDistribution::noiseless(3));
    expect_alpha(w, {1, 0, 0, 0, 0, 0, 0, 0}, 0);
    EXPECT_EQ(w.xi(), 1.0);
    Rng rng(1);
    for (int i = 0; i < 1000; i++) {
        auto [f, sign] = sample_mask(w, rng);
        ASSERT_EQ(f, BitString::zeros(3));
        ASSERT_EQ(sign, 1);
    }
}

TEST(SolveWeightsGeneral, SolvesLinearSystemOnRandomChannels) {
    Engine rng(2);
    for (int trial = 0; trial < 200; trial++) {
        int m = testing::uniform_int(rng, 1, 6);
        auto qv = testing::random_q(rng, m, 0.45, trial % 2 == 0);
        auto w = solve_weights_general(SyndromeDistribution(qv));
        auto a = w.expanded_alpha();
        for (size_t s = 0; s < qv.size(); s++) {
            double total = 0;
            for (size_t f = 0; f < qv.size(); f++) {
                total += a[f] * qv[s ^ f];
            }
            EXPECT_NEAR(total, s == 0 ? 1.0 : 0.0, 1e-9);
        }
        if (m <= 4) {
            auto dense = testing::solve_alpha_dense(qv);
            for (size_t f = 0; f < qv.size(); f++) {
                EXPECT_NEAR(a[f], dense[f], 1e-9);
            }
        }
        EXPECT_NEAR(w.xi(), testing::l1(a), 1e-12);
        EXPECT_GT(w.xi(), 1.0);
    }
}

TEST(SolveWeightsGeneral, SingularChannelReportsEigenvalue) {
    try {
        solve_weights_general(SyndromeDistribution({0.5, 0.5}));
        FAIL() << "expected SingularChannel";
    } catch (const SingularChannel &e) {
        EXPECT_EQ(e.index(), 1u);
        EXPECT_NEAR(e.eigenvalue(), 0.0, 1e-15);
    }
    // Correlated channel with a vanishing eigenvalue on k = 11.
    EXPECT_THROW(solve_weights_general(SyndromeDistribution({0.5, 0, 0, 0.5})), SingularChannel);
}

TEST(SolveWeightsTensored, Examples) {
    std::vector<double> one{0.1};
    auto w = solve_weights_tensored(one);
    expect_alpha(w, {1.125, -0.125}, 1e-15);
    EXPECT_NEAR(w.xi(), 1.25, 1e-15);

    std::vector<double> zeros{0, 0, 0};
    auto z = solve_weights_tensored(zeros);
    expect_alpha(z, {1, 0, 0, 0, 0, 0, 0, 0}, 0);
    EXPECT_EQ(z.xi(), 1.0);

    std::vector<double> two{0.1, 0.1};
    auto t = solve_weights_tensored(two);
    EXPECT_NEAR(t.xi(), 1.5625, 1e-15);
    auto g = solve_weights_general(SyndromeDistribution(testing::product_q(two)));
    EXPECT_NEAR(t.xi(), g.xi(), 1e-12);
}

TEST(SolveWeightsLayered, Examples) {
    std::vector<SyndromeDistribution> two{SyndromeDistribution({0.9, 0.1}), SyndromeDistribution({0.9, 0.1})};
    EXPECT_NEAR(solve_weights_layered(two).xi(), 1.5625, 1e-14);

    std::vector<SyndromeDistribution> single{SyndromeDistribution({0.7, 0.1, 0.15, 0.05})};
    auto layered = solve_weights_layered(single);
    auto general = solve_weights_general(single[0]);
    EXPECT_EQ(layered.expanded_alpha(), general.expanded_alpha());
    EXPECT_EQ(layered.xi(), general.xi());

    std::vector<SyndromeDistribution> mixed{SyndromeDistribution::noiseless(1), SyndromeDistribution({0.9, 0.1})};
    auto w = solve_weights_layered(mixed);
    Rng rng(3);
    for (int i = 0; i < 10000; i++) {
        auto [f, sign] = sample_mask(w, rng);
        ASSERT_FALSE(f[0]);
    }
}

TEST(SolveWeightsLayered, SingularLayerIsNamed) {
    std::vector<SyndromeDistribution> parts{SyndromeDistribution({0.9, 0.1}), SyndromeDistribution({0.5, 0.5})};
    try {
        solve_weights_layered(parts);
        FAIL() << "expected SingularChannel";
    } catch (const SingularChannel &e) {
        EXPECT_EQ(e.layer(), 1);
    }
}

TEST(StructuredWeights, ExpandedAlphaIsTensorOfFactors) {
    Engine rng(4);
    for (int trial = 0; trial < 50; trial++) {
        std::vector<SyndromeDistribution> parts;
        std::vector<double> expected{1.0};
        double xi = 1;
        for (int l = 0; l < testing::uniform_int(rng, 1, 3); l++) {
            auto qv = testing::random_q(rng, testing::uniform_int(rng, 1, 3), 0.4, l % 2 == 1);
            parts.emplace_back(qv);
            auto a = testing::solve_alpha_dense(qv);
            expected = testing::kron(expected, a);
            xi *= testing::l1(a);
        }
        auto w = solve_weights_layered(parts);
        expect_alpha(w, expected, 1e-12);
        EXPECT_NEAR(w.xi(), xi, 1e-12);
        EXPECT_NEAR(w.xi(), testing::l1(expected), 1e-12);
    }
}

TEST(SolveWeights, DispatchFollowsModelStructure) {
    EXPECT_EQ(solve_weights(GeneralModel{SyndromeDistribution({0.9, 0.1})}).structure(), WeightStructure::General);
    EXPECT_EQ(solve_weights(FullyTensoredModel{{0.1, 0.2}}).structure(), WeightStructure::Tensored);
    EXPECT_EQ(solve_weights(UniformModel{0.1, 4}).structure(), WeightStructure::Uniform);
    auto u = solve_weights(UniformModel{0.1, 4});
    EXPECT_EQ(u.num_bits(), 4);
    EXPECT_NEAR(u.xi(), std::pow(1.25, 4), 1e-12);
    EXPECT_EQ(u.factors().size(), 1u);
}

TEST(OverheadBound, Examples) {
    EXPECT_EQ(overhead_bound(0.0), 1.0);
    EXPECT_NEAR(overhead_bound(0.1), 1.25, 1e-15);
    EXPECT_NEAR(overhead_bound(0.3), 2.5, 1e-15);
    EXPECT_NEAR(overhead_bound(0.1), solve_weights_general(SyndromeDistribution({0.9, 0.1})).xi(), 1e-14);
    EXPECT_THROW(overhead_bound(0.5), std::domain_error);
    EXPECT_THROW(overhead_bound(-0.1), std::domain_error);
}

TEST(OverheadBound, HoldsOnRandomChannels) {
    Engine rng(5);
    for (int trial = 0; trial < 300; trial++) {
        int m = testing::uniform_int(rng, 1, 6);
        SyndromeDistribution q(testing::random_q(rng, m, 0.45, trial % 2 == 0));
        EXPECT_LE(solve_weights_general(q).xi(), overhead_bound(q.eta()) + 1e-12);
    }
}

TEST(SampleMask, SingleBitProbabilities) {
    auto w = solve_weights_general(SyndromeDistribution({0.9, 0.1}));
    Rng rng(6);
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; i++) {
        auto [f, sign] = sample_mask(w, rng);
        ASSERT_EQ(sign, f[0] ? -1 : 1);
        ones += f[0];
    }
    // |α_1|/ξ = 0.125/1.25 = 0.1.
    EXPECT_NEAR(ones / static_cast<double>(n), 0.1, 5 * std::sqrt(0.09 / n));
}

TEST(SampleMask, LayeredDrawsMatchExpandedDistribution) {
    std::vector<SyndromeDistribution> parts{
        SyndromeDistribution({0.8, 0.05, 0.1, 0.05}), SyndromeDistribution({0.9, 0.1})};
    auto w = solve_weights_layered(parts);
    auto a = w.expanded_alpha();
    Rng rng(7);
    const int n = 200000;
    std::vector<uint64_t> counts(a.size(), 0);
    for (int i = 0; i < n; i++) {
        auto d = w.draw(rng);
        ASSERT_EQ(d.sign, a[d.mask] < 0 ? -1 : 1);
        counts[d.mask]++;
    }
    double chi2 = 0;
    for (size_t f = 0; f < a.size(); f++) {
        double expected = n * std::abs(a[f]) / w.xi();
        chi2 += (counts[f] - expected) * (counts[f] - expected) / expected;
    }
    // 7 degrees of freedom; 24.32 is the 0.999 quantile.
    EXPECT_LT(chi2, 24.32);
}

TEST(EstimatorAccumulator, Examples) {
    EstimatorAccumulator acc(1.25);
    for (int i = 0; i < 10; i++) {
        acc.add(0.8, 1);
    }
    EXPECT_NEAR(acc.finalize().value, 1.0, 1e-15);
    EXPECT_EQ(acc.finalize().std_error, 0.0);

    EstimatorAccumulator balanced(1.0);
    for (int i = 0; i < 1000; i++) {
        balanced.add(i % 2 ? 1.0 : -1.0);
    }
    auto e = balanced.finalize();
    EXPECT_NEAR(e.value, 0.0, 1e-15);
    EXPECT_NEAR(e.std_error, std::sqrt(1000.0 / 999.0 / 1000.0), 1e-12);
}

TEST(EstimatorAccumulator, MergeEqualsConcatenation) {
    Engine rng(8);
    for (int trial = 0; trial < 50; trial++) {
        EstimatorAccumulator a(1.4), b(1.4), whole(1.4);
        std::vector<std::pair<double, int>> stream;
        int n = testing::uniform_int(rng, 2, 200);
        for (int i = 0; i < n; i++) {
            stream.emplace_back(testing::uniform(rng, -1, 1), testing::uniform(rng) < 0.3 ? -1 : 1);
        }
        int cut = testing::uniform_int(rng, 0, n);
        for (int i = 0; i < n; i++) {
            (i < cut ? a : b).add(stream[i].first, stream[i].second);
            whole.add(stream[i].first, stream[i].second);
        }
        EstimatorAccumulator ab = a, ba = b;
        ab.merge(b);
        ba.merge(a);
        EXPECT_EQ(ab.count(), whole.count());
        EXPECT_NEAR(ab.finalize().value, whole.finalize().value, 1e-12);
        EXPECT_NEAR(ab.finalize().std_error, whole.finalize().std_error, 1e-12);
        EXPECT_NEAR(ba.finalize().value, whole.finalize().value, 1e-12);

        // Finalized values follow the definitions.
        double sum = 0;
        for (auto [v, s] : stream) {
            sum += s * v;
        }
        double mean = sum / n;
        double var = 0;
        for (auto [v, s] : stream) {
            var += (s * v - mean) * (s * v - mean);
        }
        var /= (n - 1);
        EXPECT_NEAR(whole.finalize().value, 1.4 * mean, 1e-12);
        EXPECT_NEAR(whole.finalize().std_error, 1.4 * std::sqrt(var / n), 1e-12);
    }
}

TEST(EstimatorAccumulator, RejectsMismatchedMergeAndEmptyFinalize) {
    EstimatorAccumulator a(1.0), b(1.25);
    EXPECT_THROW(a.merge(b), std::invalid_argument);
    EXPECT_THROW(a.finalize(), std::logic_error);
    EXPECT_THROW(EstimatorAccumulator(0.9), std::invalid_argument);
}

TEST(ShotBudget, Examples) {
    EXPECT_EQ(shot_budget(1000, 1.0), 1000u);
    EXPECT_EQ(shot_budget(10000, 1.25), 15625u);
    // ceil(1.5625² · 1000) = ceil(2441.40625).
    EXPECT_EQ(shot_budget(1000, 1.5625), 2442u);
}

TEST(SensitivityBounds, Examples) {
    SyndromeDistribution q({0.9, 0.1});
    auto zero = sensitivity_bounds(q, q, 1.0);
    EXPECT_EQ(zero.expval_bound, 0.0);
    EXPECT_EQ(zero.xi_bound, 0.0);
    auto b = sensitivity_bounds(q, SyndromeDistribution::noiseless(1), 1.0);
    EXPECT_NEAR(b.distance, 0.1, 1e-15);
    EXPECT_NEAR(b.xi, 1.25, 1e-14);
    // Frozen: 2 · 1.25² · 0.1 / (1 - 2 · 1.25 · 0.1) = 0.3125 / 0.75.
    EXPECT_NEAR(b.expval_bound, 0.3125 / 0.75, 1e-14);
    EXPECT_NEAR(b.expval_bound, 0.41667, 1e-5);
    EXPECT_THROW(sensitivity_bounds(SyndromeDistribution({0.6, 0.4}), SyndromeDistribution::noiseless(1), 1.0),
                 BoundInapplicable);
}

TEST(SensitivityBounds, XiDeviationWithinBoundOnRandomPairs) {
    Engine rng(9);
    int checked = 0;
    for (int trial = 0; trial < 400; trial++) {
        int m = testing::uniform_int(rng, 1, 4);
        auto qv = testing::random_q(rng, m, 0.3, trial % 2 == 0);
        auto pv = qv;
        for (auto &x : pv) {
            x *= 1 + testing::uniform(rng, -0.2, 0.2);
        }
        double total = std::accumulate(pv.begin(), pv.end(), 0.0);
        for (auto &x : pv) {
            x /= total;
        }
        SyndromeDistribution q(qv), p(pv);
        auto xi = solve_weights_general(q).xi();
        if (2 * xi * total_variation(q, p) >= 1) {
            continue;
        }
        auto b = sensitivity_bounds(q, p, 1.0);
        EXPECT_LE(std::abs(solve_weights_general(p).xi() - xi), b.xi_bound + 1e-12);
        checked++;
    }
    EXPECT_GT(checked, 300);
}

TEST(RawErrorBound, Examples) {
    EXPECT_EQ(raw_error_bound(0.0, 1.0), 0.0);
    EXPECT_NEAR(raw_error_bound(0.1, 1.0), 0.25, 1e-15);
    EXPECT_THROW(raw_error_bound(0.5, 1.0), std::domain_error);
}

TEST(ProjectNonnegative, Examples) {
    std::vector<double> ok{0.2, 0.3, 0.5};
    EXPECT_EQ(project_nonnegative(ok), ok);
    auto a = project_nonnegative(std::vector<double>{1.1, -0.1});
    EXPECT_NEAR(a[0], 1.0, 1e-15);
    EXPECT_EQ(a[1], 0.0);
    auto b = project_nonnegative(std::vector<double>{-0.2, 0.6, 0.6});
    EXPECT_EQ(b[0], 0.0);
    EXPECT_NEAR(b[1], 0.5, 1e-15);
    EXPECT_NEAR(b[2], 0.5, 1e-15);
}

/// Euclidean projection onto {x ≥ 0, Σx = t} by bisection on the shift τ in x = max(c - τ, 0).
std::vector<double> simplex_projection(const std::vector<double> &c) {
    double t = std::accumulate(c.begin(), c.end(), 0.0);
    double lo = *std::min_element(c.begin(), c.end()) - t, hi = *std::max_element(c.begin(), c.end());
    for (int it = 0; it < 200; it++) {
        double tau = (lo + hi) / 2, s = 0;
        for (double x : c) {
            s += std::max(x - tau, 0.0);
        }
        (s > t ? lo : hi) = tau;
    }
    std::vector<double> out;
    for (double x : c) {
        out.push_back(std::max(x - (lo + hi) / 2, 0.0));
    }
    return out;
}

TEST(ProjectNonnegative, MatchesSimplexProjectionAndPreservesTotal) {
    Engine rng(10);
    for (int trial = 0; trial < 200; trial++) {
        int k = testing::uniform_int(rng, 1, 32);
        std::vector<double> c(k);
        for (auto &x : c) {
            x = testing::uniform(rng, -0.3, 1.0);
        }
        c[0] = std::abs(c[0]) + 0.5;
        auto p = project_nonnegative(c);
        auto oracle = simplex_projection(c);
        double total_in = std::accumulate(c.begin(), c.end(), 0.0);
        double total_out = std::accumulate(p.begin(), p.end(), 0.0);
        EXPECT_NEAR(total_out, total_in, 1e-12 * std::max(1.0, std::abs(total_in)));
        for (int i = 0; i < k; i++) {
            EXPECT_GE(p[i], 0.0);
            EXPECT_NEAR(p[i], oracle[i], 1e-9);
        }
    }
}

TEST(TerminalRem, Examples) {
    SyndromeDistribution q({0.9, 0.1});
    auto r = terminal_rem(std::vector<double>{900, 100}, q);
    EXPECT_NEAR(r[0], 1000, 1e-9);
    EXPECT_NEAR(r[1], 0, 1e-9);
    std::vector<double> c{3, 1, 4, 1};
    auto id = terminal_rem(c, SyndromeDistribution::noiseless(2));
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(id[i], c[i], 1e-12);
    }
    // Quasi counts are projected.
    auto quasi = terminal_rem(std::vector<double>{1.1, -0.1}, SyndromeDistribution::noiseless(1));
    EXPECT_NEAR(quasi[0], 1.0, 1e-12);
    EXPECT_EQ(quasi[1], 0.0);
}

TEST(TerminalRem, InversionMatchesDenseSolve) {
    Engine rng(11);
    for (int trial = 0; trial < 50; trial++) {
        int m = testing::uniform_int(rng, 1, 4);
        auto qv = testing::random_q(rng, m, 0.4, trial % 2 == 0);
        std::vector<double> c(qv.size());
        for (auto &x : c) {
            x = testing::uniform(rng, 0, 100);
        }
        auto fast = invert_counts(c, SyndromeDistribution(qv));
        auto dense = testing::gaussian_solve(testing::dense_q(qv), c);
        for (size_t i = 0; i < c.size(); i++) {
            EXPECT_NEAR(fast[i], dense[i], 1e-9 * 100);
        }
    }
    EXPECT_THROW(invert_counts(std::vector<double>{1, 1}, SyndromeDistribution({0.5, 0.5})), SingularChannel);
}

}  // namespace
}  // namespace promkit
