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

// Heat-bath dynamics of the Gaussian interface on (Z/L)^d.
//
// Sub-lattice parallel: lattice time s -> s+1 resamples every site with
// |i| + s + 1 even from N(mean of the 2d neighbours, 1/(2d)) and leaves the
// other parity untouched. One round is two half-sweeps, i.e. one update per
// site.
//
// Random sequential: each micro-update resamples one uniformly chosen site
// with the same rule. L^d micro-updates make one unit of macroscopic time,
// which approximates the rate-one Poisson-clock process for large L.

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "stcorr/rng.hpp"

namespace stcorr {

class InterfaceState {
public:
    /// Throws DomainError if heights.size() != L^d or any height is not finite.
    InterfaceState(std::int64_t L, int d, std::vector<double> heights);

    static InterfaceState flat(std::int64_t L, int d, double value = 0.0);
    /// Equilibrium sample (see sample_equilibrium).
    static InterfaceState equilibrium(std::int64_t L, int d, std::uint64_t seed,
                                      std::uint32_t replica = 0);

    [[nodiscard]] std::int64_t length() const { return L_; }
    [[nodiscard]] int dimension() const { return d_; }
    [[nodiscard]] std::int64_t sites() const { return static_cast<std::int64_t>(h_.size()); }
    [[nodiscard]] std::span<const double> heights() const { return h_; }
    [[nodiscard]] std::span<double> heights_mut() { return h_; }

    /// Number of half-sweeps applied (the lattice time).
    [[nodiscard]] std::uint64_t lattice_time() const { return lattice_time_; }
    [[nodiscard]] std::uint64_t rounds() const { return lattice_time_ / 2; }
    /// Parity class (|i| mod 2) that the next half-sweep resamples.
    [[nodiscard]] int next_parity() const { return static_cast<int>((lattice_time_ + 1) % 2); }
    [[nodiscard]] std::uint64_t micro_updates() const { return micro_updates_; }

    /// Parity |i| mod 2 of site index n (axis 0 contiguous).
    [[nodiscard]] int site_parity(std::int64_t n) const;

private:
    friend void half_sweep(InterfaceState&, const CounterRng&, int);
    friend void sequential_update(InterfaceState&, SequentialStream&, std::uint64_t);

    std::int64_t L_;
    int d_;
    std::vector<double> h_;
    std::uint64_t lattice_time_ = 0;
    std::uint64_t micro_updates_ = 0;
};

/// One half-sweep of the sub-lattice parallel heat bath. The noise at site n
/// and new lattice time s is rng.normal(s, n), so the result does not depend
/// on `workers`. Throws DomainError for odd L.
void half_sweep(InterfaceState& state, const CounterRng& rng, int workers = 1);

/// n_micro random-sequential heat-bath updates.
void sequential_update(InterfaceState& state, SequentialStream& stream, std::uint64_t n_micro);

enum class Dynamics { SublatticeParallel, RandomSequential };
enum class InitialCondition { Equilibrium, Flat };

std::string_view to_string(Dynamics dynamics);

struct SimConfig {
    std::int64_t L = 64;
    int d = 1;
    Dynamics dynamics = Dynamics::SublatticeParallel;
    std::uint64_t seed = 1;
    /// Time units (rounds, or L^d micro-updates) before the first snapshot.
    std::int64_t warmup_rounds = 0;
    /// Time units covered by snapshots after warmup.
    std::int64_t measure_rounds = 0;
    std::int64_t snapshot_stride = 1;
    int replicas = 1;
    int workers = 1;
    InitialCondition initial = InitialCondition::Equilibrium;

    /// Throws DomainError on inconsistent settings.
    void validate() const;
};

struct Snapshot {
    int replica;
    std::int64_t index;     // 0, 1, 2, ...
    std::int64_t time;      // in time units since the end of warmup
    const InterfaceState& state;
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

/// Advance one time unit (a round, or L^d micro-updates).
void advance(InterfaceState& state, Dynamics dynamics, const CounterRng& parallel_rng,
             SequentialStream& stream, std::int64_t units, int workers);

/// Runs replicas in order 0..replicas-1. Each starts from its own initial
/// condition, warms up, then emits snapshots at times 0, stride, 2 stride, ...
/// up to measure_rounds. Fully determined by the config.
void run(const SimConfig& config, const SnapshotObserver& observer);

/// Worker count from STCORR_WORKERS, or `fallback` when unset/invalid.
int workers_from_environment(int fallback = 1);

}  // namespace stcorr
