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

#include "stcorr/exact_correlations.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "stcorr/errors.hpp"
#include "stcorr/numeric.hpp"

namespace stcorr {

namespace {

void require_rounds(std::int64_t t, std::int64_t min_t, const char* what) {
    if (t < min_t) {
        throw DomainError(std::string(what) + ": round count t=" + std::to_string(t) +
                          " below minimum " + std::to_string(min_t));
    }
}

void require_even(std::int64_t j, const char* what) {
    if (j % 2 != 0) {
        throw ParityError(std::string(what) + ": spatial offset j=" + std::to_string(j) +
                          " must be even");
    }
}

void require_odd(std::int64_t j, const char* what) {
    if (j % 2 == 0) {
        throw ParityError(std::string(what) + ": spatial offset j=" + std::to_string(j) +
                          " must be odd");
    }
}

// g11 without argument checks; t >= 0, j even.
double g11_unchecked(std::int64_t t, std::int64_t j) {
    const std::int64_t m = std::llabs(j) / 2;
    if (m > t) return 0.0;
    // central value 2 * prod_{n=1..t} (2n-1)/(2n)
    double value = 2.0;
    for (std::int64_t n = 1; n <= t; ++n) {
        value *= static_cast<double>(2 * n - 1) / static_cast<double>(2 * n);
    }
    // walk out from the centre: g(t, 2(q+1)) = g(t, 2q) (t-q)/(t+q+1)
    for (std::int64_t q = 0; q < m; ++q) {
        value *= static_cast<double>(t - q) / static_cast<double>(t + q + 1);
    }
    return value;
}

}  // namespace

std::string_view short_name(CorrelationKind kind) {
    switch (kind) {
        case CorrelationKind::SpaceSpace: return "g11";
        case CorrelationKind::TimeTime: return "g22";
        case CorrelationKind::SpaceTime: return "g12";
        case CorrelationKind::TimeSpace: return "g21";
    }
    return "?";
}

std::optional<CorrelationKind> parse_kind(std::string_view name) {
    if (name == "g11") return CorrelationKind::SpaceSpace;
    if (name == "g22") return CorrelationKind::TimeTime;
    if (name == "g12") return CorrelationKind::SpaceTime;
    if (name == "g21") return CorrelationKind::TimeSpace;
    return std::nullopt;
}

bool parity_ok(CorrelationKind kind, std::int64_t j) {
    const bool even = (j % 2 == 0);
    switch (kind) {
        case CorrelationKind::SpaceSpace:
        case CorrelationKind::TimeTime: return even;
        case CorrelationKind::SpaceTime:
        case CorrelationKind::TimeSpace: return !even;
    }
    return false;
}

std::int64_t min_rounds(CorrelationKind kind) {
    return kind == CorrelationKind::SpaceSpace ? 0 : 1;
}

CorrelationQuery CorrelationQuery::make(CorrelationKind kind, std::int64_t t, std::int64_t j) {
    const auto name = std::string(short_name(kind));
    require_rounds(t, min_rounds(kind), name.c_str());
    if (!parity_ok(kind, j)) {
        throw ParityError(name + ": spatial offset j=" + std::to_string(j) + " has wrong parity");
    }
    return CorrelationQuery{kind, t, j};
}

double g11_exact(std::int64_t t, std::int64_t j) {
    require_rounds(t, 0, "g11_exact");
    require_even(j, "g11_exact");
    return g11_unchecked(t, j);
}

double g22_exact(std::int64_t t, std::int64_t j) {
    require_rounds(t, 1, "g22_exact");
    require_even(j, "g22_exact");
    return -0.25 * (g11_unchecked(t - 1, j) - g11_unchecked(t, j));
}

double g12_exact(std::int64_t t, std::int64_t j) {
    require_rounds(t, 1, "g12_exact");
    require_odd(j, "g12_exact");
    return 0.25 * (g11_unchecked(t - 1, j + 1) - g11_unchecked(t - 1, j - 1));
}

double g21_exact(std::int64_t t, std::int64_t j) {
    return -g12_exact(t, j);
}

double exact(CorrelationKind kind, std::int64_t t, std::int64_t j) {
    switch (kind) {
        case CorrelationKind::SpaceSpace: return g11_exact(t, j);
        case CorrelationKind::TimeTime: return g22_exact(t, j);
        case CorrelationKind::SpaceTime: return g12_exact(t, j);
        case CorrelationKind::TimeSpace: return g21_exact(t, j);
    }
    return 0.0;
}

namespace {
void require_positive_time(double t, const char* what) {
    if (!(t >= 1.0)) {
        throw DomainError(std::string(what) + ": requires t >= 1");
    }
}
}  // namespace

double g11_asym(double t, double j) {
    require_positive_time(t, "g11_asym");
    return 2.0 / std::sqrt(pi * t) * std::exp(-j * j / (4.0 * t));
}

double g22_asym(double t, double j) {
    require_positive_time(t, "g22_asym");
    return -(1.0 - j * j / (2.0 * t)) * std::exp(-j * j / (4.0 * t)) / (4.0 * t * std::sqrt(pi * t));
}

double g12_asym(double t, double j) {
    require_positive_time(t, "g12_asym");
    return -j * std::exp(-j * j / (4.0 * t)) / (2.0 * t * std::sqrt(pi * t));
}

double g21_asym(double t, double j) {
    return -g12_asym(t, j);
}

double asymptotic(CorrelationKind kind, double t, double j) {
    switch (kind) {
        case CorrelationKind::SpaceSpace: return g11_asym(t, j);
        case CorrelationKind::TimeTime: return g22_asym(t, j);
        case CorrelationKind::SpaceTime: return g12_asym(t, j);
        case CorrelationKind::TimeSpace: return g21_asym(t, j);
    }
    return 0.0;
}

double gaussian_upper_integral(double x) {
    return std::sqrt(pi / 2.0) * std::erfc(x / std::numbers::sqrt2);
}

double displacement_correlation_asym(double t, double j) {
    require_positive_time(t, "displacement_correlation_asym");
    if (j < 0.0) throw DomainError("displacement_correlation_asym: requires j >= 0");
    const double x = j / std::sqrt(t);
    return std::sqrt(2.0 * t / pi) * (std::exp(-0.5 * x * x) - x * gaussian_upper_integral(x));
}

namespace {

double periodic_trapezoid_g11(std::int64_t t, std::int64_t j, std::int64_t nodes) {
    std::vector<double> terms(static_cast<std::size_t>(nodes));
    const double h = 2.0 * pi / static_cast<double>(nodes);
    for (std::int64_t n = 0; n < nodes; ++n) {
        const double phi = h * static_cast<double>(n);
        const double c = std::cos(phi);
        terms[static_cast<std::size_t>(n)] =
            std::cos(static_cast<double>(j) * phi) * std::pow(c * c, static_cast<double>(t));
    }
    return pairwise_sum(terms) * h / pi;
}

}  // namespace

double g11_quadrature(std::int64_t t, std::int64_t j) {
    require_rounds(t, 0, "g11_quadrature");
    require_even(j, "g11_quadrature");
    const std::int64_t nodes = 4 * (t + std::llabs(j)) + 64;
    const double coarse = periodic_trapezoid_g11(t, j, nodes);
    const double fine = periodic_trapezoid_g11(t, j, 2 * nodes);
    if (std::abs(coarse - fine) > 1e-10) {
        throw NumericError("g11_quadrature: no convergence at t=" + std::to_string(t) +
                           " j=" + std::to_string(j) + " (nodes " + std::to_string(nodes) +
                           ": " + std::to_string(coarse) + ", nodes " +
                           std::to_string(2 * nodes) + ": " + std::to_string(fine) + ")");
    }
    return fine;
}

}  // namespace stcorr
