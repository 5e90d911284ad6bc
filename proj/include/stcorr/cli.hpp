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

// Table and figure producers behind the `stcorr` command-line tool. Each
// writes CSV with '#'-prefixed metadata lines and LF line endings.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stcorr/estimators.hpp"
#include "stcorr/simulator.hpp"

namespace stcorr {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal representation.
std::string format_number(double x);

// exact-table ----------------------------------------------------------------

/// Rows `kind,t,j,exact,asymptotic` for every kind, min_rounds <= t <= t_max
/// and |j| <= j_max of matching parity. The asymptotic cell is empty at t = 0.
void write_exact_table(std::ostream& out, std::int64_t t_max, std::int64_t j_max);

// fig2 -----------------------------------------------------------------------

struct Fig2Config {
    std::int64_t L = 100'000;
    std::int64_t t1 = 200;
    std::int64_t t_max = 20;
    std::uint64_t seed = 1;
    int replicas = 1;
    int workers = 1;
    int blocks = kDefaultBlocks;
    Dynamics dynamics = Dynamics::RandomSequential;

    void validate() const;
};

struct Fig2Row {
    std::int64_t t;
    double g11_raw, g11_scaled, g11_err;
    double g22_raw, g22_scaled, g22_err;
    double g12_raw, g12_scaled, g12_err;
    double g11_oe_exact_scaled, g22_oe_exact_scaled;
};

struct Fig2Result {
    Fig2Config config;
    std::vector<Fig2Row> rows;
};

/// Scale factors that send the leading sub-lattice asymptotics to 1.
double g11_scale(double t);            // sqrt(pi t) / 2
double g22_scale(double t);            // -4 t sqrt(pi t)
double g12_scale(double t, double j);  // -2 t sqrt(pi t) / j

Fig2Result compute_fig2(const Fig2Config& config);
void write_fig2(std::ostream& out, const Fig2Result& result);

// fig3 -----------------------------------------------------------------------

struct Fig3Config {
    std::int64_t L = 100'000;
    std::int64_t t1 = 200;
    std::int64_t t = 10;
    std::int64_t j_max = 20;
    std::uint64_t seed = 1;
    int replicas = 1;
    int workers = 1;
    int blocks = kDefaultBlocks;
    Dynamics dynamics = Dynamics::RandomSequential;

    void validate() const;
};

/// Shape A f(j; D t) fitted by weighted least squares (weights 1/err^2):
/// the amplitude in closed form, D by a bracketed one-dimensional search.
struct ShapeFit {
    double amplitude = 0.0;
    double diffusion = 0.0;
    double chi2 = 0.0;
};

enum class FitShape {
    Gaussian,      // exp(-j^2 / 4Dt)
    SecondHermite, // (1 - j^2 / 2Dt) exp(-j^2 / 4Dt)
    FirstHermite,  // j exp(-j^2 / 4Dt)
};

double shape_value(FitShape shape, double t, double j, double diffusion);
ShapeFit fit_shape(FitShape shape, double t, const std::vector<double>& js,
                   const std::vector<double>& values, const std::vector<double>& errors);

struct Fig3Row {
    std::int64_t j;
    double g11, g11_err, g22, g22_err, g12, g12_err;
    double g11_fit, g22_fit, g12_fit;
};

struct Fig3Result {
    Fig3Config config;
    ShapeFit fit11, fit22, fit12;
    std::vector<Fig3Row> rows;
};

Fig3Result compute_fig3(const Fig3Config& config);
void write_fig3(std::ostream& out, const Fig3Result& result);

// simulate -------------------------------------------------------------------

/// Per snapshot: replica, index, time, mean height, nearest-neighbour
/// gradient variance along axis 0, and mean squared displacement since the
/// replica's first snapshot.
void write_simulation(std::ostream& out, const SimConfig& config);

}  // namespace stcorr
