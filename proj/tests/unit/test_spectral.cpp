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

#include "stcorr/errors.hpp"
#include "stcorr/spectral.hpp"

using namespace stcorr;

namespace {

ModeIndex mode(const TorusSpec& s, std::int64_t nu, std::int64_t k) { return ModeIndex::make(s, nu, {k}); }

}  // namespace

TEST(Gamma, Examples) {
    const auto s = TorusSpec::make(16, 16);
    EXPECT_DOUBLE_EQ(gamma(s, mode(s, 0, 0)), 0.0);
    EXPECT_NEAR(gamma(s, mode(s, 8, 0)), 4.0, 1e-15);
    EXPECT_NEAR(gamma(s, mode(s, 4, 4)), 1.0, 1e-15);
}

TEST(Gamma, NonNegativeAndOrbitSymmetric) {
    const auto s = TorusSpec::make(12, 8);
    for (std::int64_t nu = 0; nu < s.T; ++nu) {
        for (std::int64_t k = 0; k < s.L; ++k) {
            const double g = gamma(s, mode(s, nu, k));
            EXPECT_GE(g, 0.0);
            EXPECT_EQ(g == 0.0, is_zero_mode(s, mode(s, nu, k)));
            EXPECT_NEAR(g, gamma(s, mode(s, s.T - nu, s.L - k)), 1e-14);
            EXPECT_NEAR(g, gamma(s, mode(s, nu + s.T / 2, k + s.L / 2)), 1e-14);
        }
    }
}

TEST(Gamma, TwoDimensions) {
    const auto s = TorusSpec::make(8, 8, 2);
    EXPECT_DOUBLE_EQ(gamma(s, ModeIndex::make(s, 0, {0, 0})), 0.0);
    EXPECT_NEAR(gamma(s, ModeIndex::make(s, 4, {0, 0})), 4.0, 1e-15);
    EXPECT_NEAR(gamma(s, ModeIndex::make(s, 0, {4, 0})), 1.0, 1e-15);
}

TEST(TorusSpec, RejectsOddExtents) {
    EXPECT_THROW((void)TorusSpec::make(5, 4), DomainError);
    EXPECT_THROW((void)TorusSpec::make(4, 5), DomainError);
    EXPECT_THROW((void)TorusSpec::make(4, 4, 0), DomainError);
}

TEST(ModeVariance, Examples) {
    const auto s = TorusSpec::make(16, 16);
    EXPECT_NEAR(mode_variance(s, mode(s, 8, 0)), 1.0 / 16.0, 1e-15);
    EXPECT_NEAR(mode_variance(s, mode(s, 4, 4)), 0.25, 1e-15);
    EXPECT_THROW((void)mode_variance(s, mode(s, 0, 0)), ZeroModeError);
    EXPECT_THROW((void)mode_variance(s, mode(s, 8, 8)), ZeroModeError);
}

TEST(EquilibriumGradientVariance, BridgeVariance) {
    EXPECT_NEAR(equilibrium_gradient_variance(4, 2), 1.0, 1e-12);
    EXPECT_NEAR(equilibrium_gradient_variance(4, 1), 0.75, 1e-12);
    EXPECT_EQ(equilibrium_gradient_variance(10, 0), 0.0);
    for (std::int64_t L : {6, 8, 12, 64}) {
        for (std::int64_t j = 0; j < L; ++j) {
            EXPECT_NEAR(equilibrium_gradient_variance(L, j), double(j * (L - j)) / double(L), 1e-10);
        }
    }
}

TEST(PeriodicDisplacementVariance, ApproachesRingValue) {
    EXPECT_NEAR(periodic_displacement_variance(TorusSpec::make(256, 4), 2, OffsetParity::Even), 1.0, 0.02);
    EXPECT_EQ(periodic_displacement_variance(TorusSpec::make(16, 8), 0, OffsetParity::Even), 0.0);
    const double e64 = std::abs(periodic_displacement_variance(TorusSpec::make(64, 8), 2, OffsetParity::Even) -
                                equilibrium_gradient_variance(8, 2));
    const double e256 = std::abs(periodic_displacement_variance(TorusSpec::make(256, 8), 2, OffsetParity::Even) -
                                 equilibrium_gradient_variance(8, 2));
    EXPECT_LT(e256, e64);
}

TEST(PoissonKernel, ClosedFormAndQuadrature) {
    EXPECT_NEAR(poisson_kernel(0.5, 2), 1.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(poisson_kernel(0.0, 0), 1.0);
    EXPECT_NEAR(poisson_kernel(0.9, 10), 1.8351497, 5e-8);
    for (int a10 = 1; a10 <= 9; ++a10) {
        for (int n = 0; n <= 20; ++n) {
            const double a = a10 / 10.0;
            EXPECT_NEAR(poisson_kernel_quadrature(a, n), poisson_kernel(a, n), 1e-10);
        }
    }
    EXPECT_THROW((void)poisson_kernel(1.0, 0), DomainError);
    EXPECT_THROW((void)poisson_kernel(-1.5, 0), DomainError);
}

TEST(SampleEquilibrium, PeriodicAndReproducible) {
    const auto h = sample_equilibrium(1000, 1, 42);
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += h[(i + 1) % h.size()] - h[i];
    EXPECT_NEAR(s, 0.0, 1e-9);
    EXPECT_EQ(h, sample_equilibrium(1000, 1, 42));
    EXPECT_NE(h, sample_equilibrium(1000, 1, 42, 1));
    EXPECT_THROW((void)sample_equilibrium(7, 1, 1), DomainError);
}

TEST(SampleEquilibrium, NearestNeighbourVarianceLargeRing) {
    const std::int64_t L = 4096;
    const int samples = 50;
    double s2 = 0.0;
    for (int r = 0; r < samples; ++r) {
        const auto h = sample_equilibrium(L, 1, 2024, static_cast<std::uint32_t>(r));
        for (std::int64_t i = 0; i < L; ++i) {
            const double g = h[(i + 1) % L] - h[i];
            s2 += g * g;
        }
    }
    const double n = double(samples) * double(L);
    const double expected = equilibrium_gradient_variance(L, 1);
    EXPECT_NEAR(s2 / n, expected, 4.0 * std::sqrt(2.0 / n));
}

TEST(SampleEquilibrium, SmallRingBridgeVariance) {
    const int samples = 10'000;
    double s2 = 0.0, s4 = 0.0;
    for (int r = 0; r < samples; ++r) {
        const auto h = sample_equilibrium(4, 1, 77, static_cast<std::uint32_t>(r));
        const double g = h[2] - h[0];
        s2 += g * g;
        s4 += g * g * g * g;
    }
    const double m = s2 / samples;
    const double se = std::sqrt((s4 / samples - m * m) / samples);
    EXPECT_NEAR(m, 1.0, 4.0 * se);
}

TEST(SampleEquilibrium, TwoDimensionalGradientVariance) {
    const std::int64_t L = 64;
    const auto h = sample_equilibrium(L, 2, 5);
    ASSERT_EQ(static_cast<std::int64_t>(h.size()), L * L);
    // Each axis carries half of E|grad|^2 = 2 (L^2 - 1) / L^2 / (2 d) per bond.
    double s2 = 0.0;
    for (std::int64_t y = 0; y < L; ++y) {
        for (std::int64_t x = 0; x < L; ++x) {
            const double g = h[y * L + (x + 1) % L] - h[y * L + x];
            s2 += g * g;
        }
    }
    EXPECT_NEAR(s2 / double(L * L), 0.5, 0.03);
}
