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
#include <vector>

#include "stcorr/errors.hpp"
#include "stcorr/simulator.hpp"

using namespace stcorr;

namespace {

// Mean and variance of the sites a half-sweep resampled, as z-scores.
std::pair<double, double> flat_moments_z(int d, std::int64_t L, double var) {
    auto s = InterfaceState::flat(L, d, 5.0);
    const int parity = s.next_parity();
    half_sweep(s, CounterRng(99, StreamTag::HalfSweep));
    double s1 = 0, s2 = 0;
    std::int64_t n = 0;
    for (std::int64_t i = 0; i < s.sites(); ++i) {
        if (s.site_parity(i) != parity) continue;
        const double x = s.heights()[i] - 5.0;
        s1 += x;
        s2 += x * x;
        ++n;
    }
    const double mean = s1 / double(n);
    const double v = s2 / double(n);
    return {mean / std::sqrt(var / double(n)), (v - var) / (var * std::sqrt(2.0 / double(n)))};
}

double gradient_variance(const InterfaceState& s) {
    const auto h = s.heights();
    const std::int64_t L = s.length();
    double acc = 0;
    for (std::int64_t i = 0; i < L; ++i) acc += (h[(i + 1) % L] - h[i]) * (h[(i + 1) % L] - h[i]);
    return acc / double(L);
}

}  // namespace

TEST(HalfSweep, FlatInputMomentsOneDimension) {
    const auto [zm, zv] = flat_moments_z(1, 1 << 21, 0.5);
    EXPECT_LT(std::abs(zm), 4.0);
    EXPECT_LT(std::abs(zv), 4.0);
}

TEST(HalfSweep, FlatInputMomentsTwoDimensions) {
    const auto [zm, zv] = flat_moments_z(2, 1024, 0.25);
    EXPECT_LT(std::abs(zm), 4.0);
    EXPECT_LT(std::abs(zv), 4.0);
}

TEST(HalfSweep, RestingSitesBitIdentical) {
    auto s = InterfaceState::equilibrium(256, 1, 3);
    const std::vector<double> before(s.heights().begin(), s.heights().end());
    const int parity = s.next_parity();
    half_sweep(s, CounterRng(3, StreamTag::HalfSweep));
    int changed = 0;
    for (std::int64_t i = 0; i < s.sites(); ++i) {
        if (s.site_parity(i) == parity) {
            changed += s.heights()[i] != before[i];
        } else {
            EXPECT_EQ(s.heights()[i], before[i]);
        }
    }
    EXPECT_EQ(changed, 128);
    EXPECT_EQ(s.lattice_time(), 1u);
    EXPECT_EQ(s.next_parity(), 0);
}

TEST(HalfSweep, FirstSweepUpdatesOddSites) {
    auto s = InterfaceState::flat(8, 1);
    EXPECT_EQ(s.next_parity(), 1);
    half_sweep(s, CounterRng(1, StreamTag::HalfSweep));
    EXPECT_EQ(s.heights()[0], 0.0);
    EXPECT_NE(s.heights()[1], 0.0);
}

TEST(HalfSweep, IndependentOfWorkerCount) {
    for (int d : {1, 2, 3}) {
        const std::int64_t L = d == 1 ? 1 << 16 : d == 2 ? 256 : 32;
        auto a = InterfaceState::equilibrium(L, d, 8);
        auto b = a;
        const CounterRng rng(8, StreamTag::HalfSweep);
        for (int k = 0; k < 4; ++k) {
            half_sweep(a, rng, 1);
            half_sweep(b, rng, 5);
        }
        EXPECT_TRUE(std::equal(a.heights().begin(), a.heights().end(), b.heights().begin())) << "d=" << d;
    }
}

TEST(HalfSweep, OddLengthRejected) {
    auto s = InterfaceState::flat(7, 1);
    EXPECT_THROW((void)half_sweep(s, CounterRng(1, StreamTag::HalfSweep)), DomainError);
}

TEST(HalfSweep, MeanOfFlatConfigurationPreserved) {
    const std::int64_t L = 1 << 18;
    auto s = InterfaceState::flat(L, 1, 2.0);
    half_sweep(s, CounterRng(4, StreamTag::HalfSweep));
    double m = 0;
    for (double h : s.heights()) m += h;
    m /= double(L);
    // Half the sites carry noise of variance 1/2.
    EXPECT_NEAR(m, 2.0, 4.0 * std::sqrt(0.25 / double(L)));
}

TEST(SequentialUpdate, ZeroStepsIsIdentity) {
    auto s = InterfaceState::equilibrium(64, 1, 2);
    const auto before = std::vector<double>(s.heights().begin(), s.heights().end());
    SequentialStream stream(2, StreamTag::Sequential);
    sequential_update(s, stream, 0);
    EXPECT_TRUE(std::equal(before.begin(), before.end(), s.heights().begin()));
    EXPECT_EQ(s.micro_updates(), 0u);
}

TEST(SequentialUpdate, ExactlyOneSiteChangesPerStep) {
    for (int d : {1, 2}) {
        auto s = InterfaceState::equilibrium(16, d, 6);
        SequentialStream stream(6, StreamTag::Sequential);
        for (int k = 0; k < 200; ++k) {
            const std::vector<double> before(s.heights().begin(), s.heights().end());
            sequential_update(s, stream, 1);
            int changed = 0;
            for (std::size_t i = 0; i < before.size(); ++i) changed += before[i] != s.heights()[i];
            EXPECT_EQ(changed, 1);
        }
        EXPECT_EQ(s.micro_updates(), 200u);
    }
}

TEST(Stationarity, BothDynamicsKeepGradientVariance) {
    const std::int64_t L = 1 << 15;
    for (auto dyn : {Dynamics::SublatticeParallel, Dynamics::RandomSequential}) {
        auto s = InterfaceState::equilibrium(L, 1, 12);
        const CounterRng rng(12, StreamTag::HalfSweep);
        SequentialStream stream(12, StreamTag::Sequential);
        advance(s, dyn, rng, stream, 100, 1);
        EXPECT_NEAR(gradient_variance(s), 1.0, 0.02) << to_string(dyn);
        // Lag-2 gradient covariance stays zero.
        const auto h = s.heights();
        double c = 0;
        for (std::int64_t i = 0; i < L; ++i) {
            c += (h[(i + 1) % L] - h[i]) * (h[(i + 3) % L] - h[(i + 2) % L]);
        }
        EXPECT_NEAR(c / double(L), 0.0, 4.0 * std::sqrt(1.0 / double(L)) * 1.5) << to_string(dyn);
    }
}

TEST(Run, DeterministicSnapshots) {
    SimConfig c;
    c.L = 128;
    c.measure_rounds = 6;
    c.snapshot_stride = 2;
    c.replicas = 2;
    c.seed = 31;
    std::vector<std::vector<double>> a, b;
    std::vector<std::int64_t> times;
    run(c, [&](const Snapshot& s) {
        a.emplace_back(s.state.heights().begin(), s.state.heights().end());
        times.push_back(s.time);
        if (s.replica == 0) EXPECT_EQ(s.state.lattice_time(), 2u * static_cast<std::uint64_t>(s.time));
    });
    run(c, [&](const Snapshot& s) { b.emplace_back(s.state.heights().begin(), s.state.heights().end()); });
    EXPECT_EQ(a, b);
    EXPECT_EQ(times, (std::vector<std::int64_t>{0, 2, 4, 6, 0, 2, 4, 6}));
    EXPECT_NE(a[0], a[4]);
}

TEST(Run, SequentialTimeUnitIsLMicroUpdates) {
    SimConfig c;
    c.L = 64;
    c.d = 2;
    c.dynamics = Dynamics::RandomSequential;
    c.measure_rounds = 3;
    c.warmup_rounds = 1;
    std::vector<std::uint64_t> micro;
    run(c, [&](const Snapshot& s) { micro.push_back(s.state.micro_updates()); });
    EXPECT_EQ(micro, (std::vector<std::uint64_t>{4096, 8192, 12288, 16384}));
}

TEST(Run, FlatInitialCondition) {
    SimConfig c;
    c.L = 16;
    c.initial = InitialCondition::Flat;
    std::vector<double> first;
    run(c, [&](const Snapshot& s) { first.assign(s.state.heights().begin(), s.state.heights().end()); });
    EXPECT_EQ(first, std::vector<double>(16, 0.0));
}

TEST(SimConfig, Validation) {
    SimConfig c;
    c.L = 9;
    EXPECT_THROW((void)c.validate(), DomainError);
    c.dynamics = Dynamics::RandomSequential;
    EXPECT_THROW((void)c.validate(), DomainError);  // the equilibrium sampler needs even L
    c.initial = InitialCondition::Flat;
    EXPECT_NO_THROW(c.validate());
    c.replicas = 0;
    EXPECT_THROW((void)c.validate(), DomainError);
    SimConfig d;
    d.snapshot_stride = 0;
    EXPECT_THROW((void)d.validate(), DomainError);
    SimConfig e;
    e.measure_rounds = -1;
    EXPECT_THROW((void)e.validate(), DomainError);
}

TEST(InterfaceState, RejectsBadInput) {
    EXPECT_THROW((void)InterfaceState(4, 1, {0, 0, 0}), DomainError);
    EXPECT_THROW((void)InterfaceState(2, 1, {0, std::nan("")}), DomainError);
}
