// Copyright 2026 The stcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "propagation_oracle.hpp"
#include "stcorr/errors.hpp"
#include "stcorr/estimators.hpp"
#include "stcorr/spectral.hpp"

using namespace stcorr;

namespace {

std::vector<std::vector<double>> snapshots(std::int64_t L, std::int64_t count, std::uint64_t seed,
                                           Dynamics dyn = Dynamics::SublatticeParallel) {
    SimConfig c;
    c.L = L;
    c.seed = seed;
    c.dynamics = dyn;
    c.measure_rounds = count - 1;
    std::vector<std::vector<double>> out;
    run(c, [&](const Snapshot& s) { out.emplace_back(s.state.heights().begin(), s.state.heights().end()); });
    return out;
}

}  // namespace

TEST(PropagationOracle, AgreesWithClosedForms) {
    // On a ring of L sites g11 carries the constant correction -4/L; the
    // other kinds are differences in time and see none.
    const std::int64_t L = 64;
    const test_support::PropagationOracle o(L);
    for (std::int64_t t = 0; t <= 5; ++t) {
        for (std::int64_t j = -4; j <= 4; j += 2) {
            EXPECT_NEAR(o.pair_correlation(CorrelationKind::SpaceSpace, t, j), g11_exact(t, j) - 4.0 / L, 1e-12)
                << "t=" << t << " j=" << j;
        }
    }
    for (std::int64_t t = 1; t <= 5; ++t) {
        EXPECT_NEAR(o.pair_correlation(CorrelationKind::TimeTime, t, 0), g22_exact(t, 0), 1e-12);
        for (std::int64_t j : {-3, -1, 1, 3}) {
            EXPECT_NEAR(o.pair_correlation(CorrelationKind::SpaceTime, t, j), g12_exact(t, j), 1e-12);
            EXPECT_NEAR(o.pair_correlation(CorrelationKind::TimeSpace, t, j), g21_exact(t, j), 1e-12);
        }
    }
}

TEST(PropagationOracle, DifferencesOfG11AreExact) {
    // Time-independent ring corrections cancel in differences along t.
    const test_support::PropagationOracle o(64);
    for (std::int64_t t = 1; t <= 5; ++t) {
        const double oracle = o.pair_correlation(CorrelationKind::SpaceSpace, t, 0) -
                              o.pair_correlation(CorrelationKind::SpaceSpace, t - 1, 0);
        EXPECT_NEAR(oracle, g11_exact(t, 0) - g11_exact(t - 1, 0), 1e-12);
    }
}

TEST(CircularCrossSums, MatchesNaive) {
    const std::int64_t L = 37;
    std::vector<double> a(L), b(L);
    for (std::int64_t i = 0; i < L; ++i) {
        a[i] = std::sin(0.3 * double(i)) + 0.1 * double(i);
        b[i] = std::cos(0.7 * double(i * i));
    }
    const std::int64_t jm = 5;
    const int blocks = 4;
    for (std::int64_t shift : {0, -1, 3}) {
        std::vector<double> sums(static_cast<std::size_t>(blocks * (2 * jm + 1)));
        circular_cross_sums(a, b, shift, jm, blocks, sums);
        for (int blk = 0; blk < blocks; ++blk) {
            for (std::int64_t j = -jm; j <= jm; ++j) {
                double ref = 0;
                for (std::int64_t i = segment_begin(blk, L, blocks); i < segment_begin(blk + 1, L, blocks); ++i) {
                    ref += a[i] * b[((i + j + shift) % L + L) % L];
                }
                EXPECT_NEAR(sums[blk * (2 * jm + 1) + j + jm], ref, 1e-12);
            }
        }
    }
}

TEST(SegmentBegin, CoversRing) {
    EXPECT_EQ(segment_begin(0, 100, 8), 0);
    EXPECT_EQ(segment_begin(8, 100, 8), 100);
    for (int b = 0; b < 8; ++b) {
        const auto len = segment_begin(b + 1, 100, 8) - segment_begin(b, 100, 8);
        EXPECT_TRUE(len == 12 || len == 13);
    }
}

TEST(BatchStandardError, Formula) {
    const std::vector<double> m{1, 2, 3, 4, 5, 6, 7, 8};
    // sample variance 6, B = 8
    EXPECT_NEAR(batch_standard_error(m), std::sqrt(6.0 / 8.0), 1e-15);
    const std::vector<double> few{1, 2, 3};
    EXPECT_THROW((void)batch_standard_error(few), InsufficientDataError);
}

TEST(Accumulate, BatchMatchesStreaming) {
    const auto snaps = snapshots(256, 14, 3);
    const auto batch = accumulate(snaps, CorrelationKind::SpaceTime, 4, 5, 8);
    EstimatorConfig cfg;
    cfg.kinds = {CorrelationKind::SpaceTime};
    cfg.t_max = 4;
    cfg.j_max = 5;
    cfg.origins = batch.origins();
    cfg.blocks = 8;
    CorrelationEstimator est(256, cfg);
    for (std::int64_t k = 0; k < est.snapshots_needed(); ++k) est.push(snaps[k]);
    ASSERT_TRUE(est.complete());
    const auto& acc = est.accumulator(CorrelationKind::SpaceTime);
    for (std::int64_t t = 1; t <= 4; ++t) {
        EXPECT_EQ(acc.count(t), 256 * cfg.origins);
        EXPECT_EQ(acc.origins_done(t), cfg.origins);
        for (std::int64_t j = -5; j <= 5; ++j) {
            EXPECT_NEAR(acc.mean(t, j), batch.mean(t, j), 1e-13);
            EXPECT_NEAR(acc.standard_error(t, j), batch.standard_error(t, j), 1e-13);
        }
    }
}

TEST(Accumulate, DirectProductDefinitions) {
    const std::int64_t L = 64;
    const auto snaps = snapshots(L, 6, 4);
    const auto g11 = accumulate(snaps, CorrelationKind::SpaceSpace, 2, 2, 8);
    const auto g22 = accumulate(snaps, CorrelationKind::TimeTime, 2, 2, 8);
    const auto g12 = accumulate(snaps, CorrelationKind::SpaceTime, 2, 3, 8);
    const auto g21 = accumulate(snaps, CorrelationKind::TimeSpace, 2, 3, 8);
    auto S = [&](std::int64_t tau, std::int64_t i) { return snaps[tau][(i + 2) % L] - snaps[tau][i % L]; };
    auto D = [&](std::int64_t tau, std::int64_t i) { return snaps[tau + 1][i % L] - snaps[tau][i % L]; };
    const std::int64_t origins = g11.origins();
    const std::int64_t t = 2, j = 2, jo = 1;
    double r11 = 0, r22 = 0, r12 = 0, r21 = 0;
    for (std::int64_t o = 0; o < origins; ++o) {
        for (std::int64_t i = 0; i < L; ++i) {
            r11 += S(o, i) * S(o + t, i + L + j);
            r22 += D(o, i) * D(o + t, i + L + j);
            r12 += D(o, i) * S(o + t, i + L + jo - 1);
            r21 += D(o + t - 1, i) * S(o, i + L + jo - 1);
        }
    }
    const double n = double(origins * L);
    EXPECT_NEAR(g11.mean(t, j), r11 / n, 1e-12);
    EXPECT_NEAR(g22.mean(t, j), r22 / n, 1e-12);
    EXPECT_NEAR(g12.mean(t, jo), r12 / n, 1e-12);
    EXPECT_NEAR(g21.mean(t, jo), r21 / n, 1e-12);
}

TEST(Accumulate, InsufficientSnapshots) {
    const auto snaps = snapshots(64, 4, 1);
    EXPECT_THROW((void)accumulate(snaps, CorrelationKind::SpaceSpace, 5, 2), InsufficientDataError);
}

TEST(Accumulate, EmptyCellThrows) {
    PairCorrelationAccumulator acc(CorrelationKind::SpaceSpace, 64, {0, 1}, 2, 10, 8);
    EXPECT_THROW((void)acc.mean(1, 0), InsufficientDataError);
    EXPECT_THROW((void)acc.standard_error(1, 0), InsufficientDataError);
    EXPECT_THROW((void)acc.mean(2, 0), InsufficientDataError);
}

TEST(Accumulator, MergeIsOrderIndependent) {
    const auto a = accumulate(snapshots(128, 10, 1), CorrelationKind::SpaceSpace, 3, 4, 8);
    const auto b = accumulate(snapshots(128, 10, 2), CorrelationKind::SpaceSpace, 3, 4, 8);
    auto ab = a;
    ab.merge(b);
    auto ba = b;
    ba.merge(a);
    for (std::int64_t t = 0; t <= 3; ++t) {
        EXPECT_EQ(ab.count(t), 2 * a.count(t));
        for (std::int64_t j = -4; j <= 4; j += 2) EXPECT_NEAR(ab.mean(t, j), ba.mean(t, j), 1e-14);
    }
    const auto other = accumulate(snapshots(128, 10, 2), CorrelationKind::SpaceSpace, 3, 2, 8);
    EXPECT_THROW((void)ab.merge(other), DomainError);
}

TEST(DisplacementVariance, ZeroLagAndDefinition) {
    const auto snaps = snapshots(64, 5, 2);
    EXPECT_EQ(displacement_variance(snaps, 0), 0.0);
    double ref = 0;
    for (std::int64_t o = 0; o + 3 < 5; ++o) {
        for (std::int64_t i = 0; i < 64; ++i) ref += std::pow(snaps[o + 3][i] - snaps[o][i], 2);
    }
    EXPECT_NEAR(displacement_variance(snaps, 3), ref / (2.0 * 64.0), 1e-12);
    EXPECT_THROW((void)displacement_variance(snaps, 5), InsufficientDataError);
}

TEST(DisplacementAccumulator, MatchesBatchForm) {
    const auto snaps = snapshots(256, 12, 5);
    DisplacementAccumulator acc(256, {1, 2, 4}, 8, 8);
    for (std::int64_t k = 0; k < acc.snapshots_needed(); ++k) acc.push(snaps[k]);
    ASSERT_TRUE(acc.complete());
    const std::vector<std::vector<double>> window(snaps.begin(), snaps.begin() + 12);
    for (std::int64_t t : {1, 2, 4}) {
        double ref = 0;
        for (std::int64_t o = 0; o < 8; ++o) {
            for (std::int64_t i = 0; i < 256; ++i) ref += std::pow(snaps[o + t][i] - snaps[o][i], 2);
        }
        EXPECT_NEAR(acc.mean(t), ref / (8.0 * 256.0), 1e-12);
        EXPECT_GE(acc.standard_error(t), 0.0);
    }
}

TEST(DisplacementVariance, OneDimensionalLeadingTerm) {
    SimConfig sim;
    sim.L = 1 << 15;
    sim.seed = 17;
    EstimatorConfig cfg;
    cfg.kinds = {};
    cfg.origins = 20;
    cfg.displacement_lags = {50, 100};
    const auto est = measure(sim, cfg);
    // The leading term takes lattice time: t rounds are 2t half-sweeps.
    EXPECT_NEAR(est.displacement()->mean(50), std::sqrt(200.0 / pi), 0.15 * std::sqrt(200.0 / pi));
    EXPECT_NEAR(est.displacement()->mean(100), displacement_correlation_asym(200, 0),
                0.15 * displacement_correlation_asym(200, 0));
}

TEST(MonteCarlo, EqualTimeValues) {
    SimConfig sim;
    sim.L = 1 << 15;
    sim.seed = 21;
    EstimatorConfig cfg;
    cfg.kinds = {CorrelationKind::SpaceSpace};
    cfg.t_max = 0;
    cfg.j_max = 2;
    cfg.origins = 50;
    const auto est = measure(sim, cfg);
    const auto& acc = est.accumulator(CorrelationKind::SpaceSpace);
    EXPECT_LE(std::abs(acc.mean(0, 0) - 2.0), 3.0 * acc.standard_error(0, 0));
    EXPECT_LE(std::abs(acc.mean(0, 2)), 3.0 * acc.standard_error(0, 2));
}

TEST(MonteCarlo, MatchesPropagationOracleOnSmallRing) {
    // At L = 32 the ring correction (-4/L for g11) is larger than the tolerance.
    const std::int64_t L = 32;
    SimConfig sim;
    sim.L = L;
    sim.replicas = 400;
    sim.seed = 8;
    EstimatorConfig cfg;
    cfg.kinds = {CorrelationKind::SpaceSpace, CorrelationKind::SpaceTime};
    cfg.t_max = 3;
    cfg.j_max = 3;
    cfg.origins = 20;
    cfg.blocks = 8;
    const auto est = measure(sim, cfg);
    const test_support::PropagationOracle o(L);
    const auto& g11 = est.accumulator(CorrelationKind::SpaceSpace);
    const auto& g12 = est.accumulator(CorrelationKind::SpaceTime);
    for (std::int64_t t = 0; t <= 3; ++t) {
        for (std::int64_t j = -2; j <= 2; j += 2) {
            EXPECT_NEAR(g11.mean(t, j), o.pair_correlation(CorrelationKind::SpaceSpace, t, j), 0.03);
        }
    }
    for (std::int64_t t = 1; t <= 3; ++t) {
        EXPECT_NEAR(g12.mean(t, 1), o.pair_correlation(CorrelationKind::SpaceTime, t, 1), 0.03);
    }
}

TEST(StandardError, ShrinksWithMoreOrigins) {
    auto se = [](std::int64_t origins) {
        SimConfig sim;
        sim.L = 1 << 14;
        sim.seed = 40;
        sim.replicas = 4;
        EstimatorConfig cfg;
        cfg.kinds = {CorrelationKind::TimeTime};
        cfg.t_max = 2;
        cfg.origins = origins;
        return measure(sim, cfg).accumulator(CorrelationKind::TimeTime).standard_error(2, 0);
    };
    const double ratio = se(50) / se(100);
    EXPECT_NEAR(ratio, std::sqrt(2.0), 0.3 * std::sqrt(2.0));
}

TEST(StandardError, FreeFunctionAndNonNegative) {
    const auto acc = accumulate(snapshots(512, 12, 9), CorrelationKind::SpaceSpace, 2, 2);
    for (std::int64_t t = 0; t <= 2; ++t) {
        EXPECT_GE(standard_error(acc, t, 0), 0.0);
        EXPECT_EQ(standard_error(acc, t, 0), acc.standard_error(t, 0));
    }
}

TEST(StandardError, SequentialG11BelowOnePercent) {
    SimConfig sim;
    sim.L = 100'000;
    sim.dynamics = Dynamics::RandomSequential;
    sim.seed = 13;
    EstimatorConfig cfg;
    cfg.kinds = {CorrelationKind::SpaceSpace};
    cfg.origins = 100;
    const auto est = measure(sim, cfg);
    const auto& acc = est.accumulator(CorrelationKind::SpaceSpace);
    EXPECT_LT(acc.standard_error(0, 0), 0.01);
}

TEST(EstimatorConfig, Validation) {
    EstimatorConfig c;
    c.origins = 0;
    EXPECT_THROW((void)c.validate(), DomainError);
    EstimatorConfig d;
    d.j_max = -1;
    EXPECT_THROW((void)d.validate(), DomainError);
    EstimatorConfig e;
    e.t_max = 3;
    EXPECT_EQ(e.resolved_lags(), (std::vector<std::int64_t>{0, 1, 2, 3}));
    SimConfig sim;
    sim.d = 2;
    EXPECT_THROW((void)measure(sim, EstimatorConfig{}), DomainError);
}
