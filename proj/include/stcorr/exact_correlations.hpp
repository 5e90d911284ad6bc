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

#include <cstdint>
#include <optional>
#include <string_view>

namespace stcorr {

/// The four gradient-gradient space-time correlations of the interface.
///
/// SpaceSpace (g11) and TimeTime (g22) live on even spatial offsets,
/// SpaceTime (g12) and TimeSpace (g21) on odd ones.
enum class CorrelationKind { SpaceSpace, TimeTime, SpaceTime, TimeSpace };

std::string_view short_name(CorrelationKind kind);  // "g11", "g22", ...
std::optional<CorrelationKind> parse_kind(std::string_view name);

/// True when `j` has the parity the kind is defined on.
bool parity_ok(CorrelationKind kind, std::int64_t j);

/// Smallest admissible round count: 0 for g11, 1 otherwise.
std::int64_t min_rounds(CorrelationKind kind);

/// A validated (kind, t, j) triple. `t` counts update rounds, i.e. the
/// lattice time separation is 2t.
struct CorrelationQuery {
    CorrelationKind kind;
    std::int64_t t;
    std::int64_t j;

    /// Throws DomainError / ParityError when the triple is not admissible.
    static CorrelationQuery make(CorrelationKind kind, std::int64_t t, std::int64_t j);
};

// Exact infinite-volume correlations of the sub-lattice parallel dynamics.

/// 2^(1-2t) (2t)! / ((t-|j|/2)! (t+|j|/2)!) for |j| <= 2t, zero outside the
/// light cone. Even in j. Evaluated by multiplicative recurrence from the
/// central term, so it stays finite and accurate for t up to ~1e6.
double g11_exact(std::int64_t t, std::int64_t j);

/// -(1/4) [g11(t-1,|j|) - g11(t,|j|)], t >= 1, j even.
double g22_exact(std::int64_t t, std::int64_t j);

/// (1/4) [g11(t-1,|j+1|) - g11(t-1,|j-1|)], t >= 1, j odd. Odd in j.
///
/// The prefactor 1/4 comes from E|h(nu,k)|^2 = 1/(4 gamma); without it the
/// value disagrees with the dense space-time covariance and with simulation.
double g12_exact(std::int64_t t, std::int64_t j);

/// -g12_exact(t, j) (time reversal).
double g21_exact(std::int64_t t, std::int64_t j);

/// Dispatch on kind.
double exact(CorrelationKind kind, std::int64_t t, std::int64_t j);

// Leading large-t behaviour. No parity restriction; t >= 1.

double g11_asym(double t, double j);  // 2/sqrt(pi t) exp(-j^2/4t)
double g22_asym(double t, double j);  // -(1 - j^2/2t) exp(-j^2/4t) / (4 t sqrt(pi t))
double g12_asym(double t, double j);  // -j exp(-j^2/4t) / (2 t sqrt(pi t))
double g21_asym(double t, double j);  // -g12_asym

/// Dispatch on kind.
double asymptotic(CorrelationKind kind, double t, double j);

/// Integral of exp(-u^2/2) over [x, inf), as sqrt(pi/2) erfc(x/sqrt 2).
double gaussian_upper_integral(double x);

/// Leading term of E(h^t_j - h^0_j)(h^t_0 - h^0_0):
///   sqrt(2t/pi) [exp(-x^2/2) - x * gaussian_upper_integral(x)],  x = j/sqrt(t),
/// which equals sqrt(2t/pi) * int_1^inf u^-2 exp(-x^2 u^2 / 2) du.
/// Here t is lattice time (half-sweeps): after t rounds of the sub-lattice
/// dynamics evaluate at 2t. Requires t >= 1, j >= 0.
double displacement_correlation_asym(double t, double j);

/// Independent oracle for g11_exact:
///   (1/pi) int_0^{2pi} cos(j phi) cos^{2t}(phi) dphi
/// by a composite periodic trapezoid rule with 4(t+|j|)+64 nodes, which is
/// exact for this trigonometric polynomial up to rounding. A second pass with
/// twice the nodes must agree to 1e-10, otherwise NumericError is thrown.
double g11_quadrature(std::int64_t t, std::int64_t j);

}  // namespace stcorr
