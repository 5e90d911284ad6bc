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

#include "stcorr/rng.hpp"

#include <cmath>

#include "stcorr/numeric.hpp"

namespace stcorr {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        counter = philox_round(counter, key);
    }
    return counter;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::pair<double, double> box_muller(double u1, double u2) {
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * pi * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
}

CounterRng::CounterRng(std::uint64_t seed, StreamTag tag, std::uint32_t replica) {
    const std::uint64_t k = splitmix64(seed);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    tag_word_ = (static_cast<std::uint32_t>(tag) << 24) ^ (replica & 0x00FFFFFFu);
}

PhiloxCounter CounterRng::block(std::uint64_t major, std::uint32_t minor) const {
    return philox4x32_10({minor, static_cast<std::uint32_t>(major),
                          static_cast<std::uint32_t>(major >> 32), tag_word_},
                         key_);
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t major, std::uint32_t minor) const {
    const auto b = block(major, minor);
    const std::uint64_t x = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
    const std::uint64_t y = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    return box_muller(to_open_unit(x), to_open_unit(y));
}

SequentialStream::SequentialStream(std::uint64_t seed, StreamTag tag, std::uint32_t replica)
    : gen_(seed, tag, replica) {}

void SequentialStream::refill() {
    buffer_ = gen_.block(counter_, 0);
    ++counter_;
    available_ = 4;
}

std::uint32_t SequentialStream::next_u32() {
    if (available_ == 0) refill();
    return buffer_[static_cast<std::size_t>(4 - available_--)];
}

std::uint64_t SequentialStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double SequentialStream::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const auto [a, b] = box_muller(u1, u2);
    spare_normal_ = b;
    has_spare_ = true;
    return a;
}

std::uint32_t SequentialStream::next_index(std::uint32_t n) {
    std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
        const std::uint32_t threshold = (0u - n) % n;
        while (low < threshold) {
            m = static_cast<std::uint64_t>(next_u32()) * n;
            low = static_cast<std::uint32_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 32);
}

}  // namespace stcorr
