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

#pragma once

// Fourier-side quantities of the space-time periodic field and of the
// equilibrium interface measure.

#include <cstdint>
#include <vector>

namespace stcorr {

/// Finite space-time torus (Z/T) x (Z/L)^d. T and L are even.
struct TorusSpec {
    std::int64_t T = 2;
    std::int64_t L = 2;
    int d = 1;

    /// Throws DomainError unless T, L are even and positive and d >= 1.
    static TorusSpec make(std::int64_t T, std::int64_t L, int d = 1);
};

/// Fourier label (nu, k), reduced modulo T and L.
struct ModeIndex {
    std::int64_t nu = 0;
    std::vector<std::int64_t> k;

    static ModeIndex make(const TorusSpec& spec, std::int64_t nu, std::vector<std::int64_t> k);
};

/// cos(2 pi n / N) with exact values at multiples of N/4.
double cos_2pi_frac(std::int64_t n, std::int64_t N);
/// sin(2 pi n / N) with exact values at multiples of N/4.
double sin_2pi_frac(std::int64_t n, std::int64_t N);

/// Mean of cos(2 pi k_n / L) over the d axes.
double neighbor_cosine(std::int64_t L, const std::vector<std::int64_t>& k);

/// Space-time eigenvalue 1 - 2 cos(2 pi nu/T) c(k) + c(k)^2 >= 0, zero exactly
/// on the orbit {(0,0), (T/2, L/2,...,L/2)}.
double gamma(const TorusSpec& spec, const ModeIndex& mode);

bool is_zero_mode(const TorusSpec& spec, const ModeIndex& mode);

/// E|h(nu,k)|^2 = 1 / (4 gamma). Throws ZeroModeError on the zero-mode orbit,
/// whose coefficient is distributed according to the Lebesgue measure.
double mode_variance(const TorusSpec& spec, const ModeIndex& mode);

/// E(h_j - h_0)^2 under the equilibrium measure on the ring of size L, from
/// the parity-split mode sums (k != 0, L/2). Requires L even, 0 <= j < L.
/// Equals the bridge variance j (L - j) / L.
double equilibrium_gradient_variance(std::int64_t L, std::int64_t j);

enum class OffsetParity { Even, Odd };

/// Finite-(T,L) mode sum for the space-time periodic field (d = 1):
///   even j:  E(h^0_j - h^0_0)^2
///   odd j:   E(h^1_j - h^0_0)^2
/// Tends to equilibrium_gradient_variance(L, j) as T grows at fixed L.
double periodic_displacement_variance(const TorusSpec& spec, std::int64_t j,
                                      OffsetParity parity);

/// a^n / (1 - a^2), the value of
///   (1/2pi) int_0^{2pi} cos(n w) / (1 - 2 a cos w + a^2) dw,   |a| < 1.
double poisson_kernel(double a, std::int64_t n);

/// The same integral evaluated numerically (adaptive periodic trapezoid).
double poisson_kernel_quadrature(double a, std::int64_t n);

/// Exact sample of the equilibrium measure on (Z/L)^d with the zero mode
/// pinned to 0. Spatial mode k gets E|h_k|^2 = 1 / (2d (1 - c(k))); pairs
/// (k, -k) share one complex Gaussian, self-conjugate modes are real.
/// Heights are stored with axis 0 contiguous. Bit-reproducible for a given
/// (seed, replica).
std::vector<double> sample_equilibrium(std::int64_t L, int d, std::uint64_t seed,
                                       std::uint32_t replica = 0);

}  // namespace stcorr
