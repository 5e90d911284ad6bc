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

// Counter-based random numbers.
//
// Every random draw in the toolkit is a pure function of (seed, stream tag,
// replica, counter) through Philox4x32-10, so parallel sweeps produce the
// same bits regardless of how sites are split among workers, and results are
// reproducible across platforms. Uniforms carry 52 random bits and lie in the
// open interval (0, 1); normals come from the Box-Muller transform.

#include <array>
#include <cstdint>
#include <utility>

namespace stcorr {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., Random123).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// SplitMix64 finaliser; used to turn a user seed into a Philox key.
std::uint64_t splitmix64(std::uint64_t x);

/// 64 bits -> (0,1): midpoints of 2^52 equal cells, so both ends are excluded.
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Standard normal pair from two uniforms in (0,1).
std::pair<double, double> box_muller(double u1, double u2);

/// Independent streams drawn from one seed.
enum class StreamTag : std::uint32_t {
    Equilibrium = 1,
    HalfSweep = 2,
    Sequential = 3,
};

/// Stateless generator: value at (a, b) is fixed by (seed, tag, replica).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, StreamTag tag, std::uint32_t replica = 0);

    [[nodiscard]] PhiloxCounter block(std::uint64_t major, std::uint32_t minor) const;

    /// Two independent standard normals for counter (major, minor).
    [[nodiscard]] std::pair<double, double> normal_pair(std::uint64_t major,
                                                        std::uint32_t minor) const;

    /// One standard normal (the first of normal_pair).
    [[nodiscard]] double normal(std::uint64_t major, std::uint32_t minor) const {
        return normal_pair(major, minor).first;
    }

private:
    PhiloxKey key_{};
    std::uint32_t tag_word_ = 0;
};

/// Sequential stream over an incrementing Philox counter. Not thread-safe;
/// one per replica.
class SequentialStream {
public:
    SequentialStream(std::uint64_t seed, StreamTag tag, std::uint32_t replica = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    double next_uniform() { return to_open_unit(next_u64()); }
    double next_normal();

    /// Uniform integer in [0, n), n >= 1, unbiased (Lemire's multiply-shift
    /// with rejection).
    std::uint32_t next_index(std::uint32_t n);

    [[nodiscard]] std::uint64_t blocks_consumed() const { return counter_; }

private:
    void refill();

    CounterRng gen_;
    std::uint64_t counter_ = 0;
    PhiloxCounter buffer_{};
    int available_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace stcorr
