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

#include "stcorr/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>
#include <thread>

#include "stcorr/errors.hpp"
#include "stcorr/spectral.hpp"

namespace stcorr {

namespace {

constexpr std::int64_t kMaxSites = std::int64_t{1} << 31;
constexpr std::int64_t kMinSitesPerWorker = 4096;

std::int64_t checked_volume(std::int64_t L, int d) {
    if (L < 2) throw DomainError("lattice extent L=" + std::to_string(L) + " must be >= 2");
    if (d < 1 || d > 8) throw DomainError("dimension d=" + std::to_string(d) + " must be in 1..8");
    std::int64_t n = 1;
    for (int a = 0; a < d; ++a) {
        if (n > kMaxSites / L) throw DomainError("lattice volume L^d exceeds 2^31 sites");
        n *= L;
    }
    return n;
}

// Noise for site n at lattice time s. Sites 4a + 2b + p share the Philox
// block (s, a) and use component b, so each block serves two sites of the
// same parity.
class SiteNoise {
public:
    explicit SiteNoise(const CounterRng& rng, std::uint64_t s) : rng_(rng), s_(s) {}

    double operator()(std::int64_t n) {
        const auto a = static_cast<std::uint32_t>(n >> 2);
        if (a != cached_ || !valid_) {
            pair_ = rng_.normal_pair(s_, a);
            cached_ = a;
            valid_ = true;
        }
        return ((n >> 1) & 1) != 0 ? pair_.second : pair_.first;
    }

private:
    const CounterRng& rng_;
    std::uint64_t s_;
    std::uint32_t cached_ = 0;
    bool valid_ = false;
    std::pair<double, double> pair_{};
};

struct SweepGeometry {
    std::int64_t L;
    int d;
    std::int64_t lines;  // L^(d-1)
    std::vector<std::int64_t> stride;  // stride[a] = L^a
};

// Updates sites of lines [line_begin, line_end) whose axis-0 coordinate lies
// in [x_begin, x_end). Only sites with |i| + s even are written.
void sweep_block(std::vector<double>& h, const SweepGeometry& g, const CounterRng& rng,
                 std::uint64_t s, std::int64_t line_begin, std::int64_t line_end,
                 std::int64_t x_begin, std::int64_t x_end) {
    const std::int64_t L = g.L;
    const int d = g.d;
    const double inv_coord = 1.0 / (2.0 * d);
    const double sd = std::sqrt(inv_coord);
    SiteNoise noise(rng, s);
    double* const hp = h.data();

    std::vector<std::int64_t> plus(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> minus(static_cast<std::size_t>(d), 0);
    for (std::int64_t r = line_begin; r < line_end; ++r) {
        const std::int64_t base = r * L;
        std::int64_t parity_sum = 0;
        std::int64_t rest = r;
        for (int a = 1; a < d; ++a) {
            const std::int64_t c = rest % L;
            rest /= L;
            parity_sum += c;
            const std::int64_t st = g.stride[static_cast<std::size_t>(a)];
            plus[static_cast<std::size_t>(a)] = base + (c == L - 1 ? -(L - 1) * st : st);
            minus[static_cast<std::size_t>(a)] = base + (c == 0 ? (L - 1) * st : -st);
        }
        std::int64_t x = x_begin + ((x_begin + parity_sum + static_cast<std::int64_t>(s % 2)) & 1);
        for (; x < x_end; x += 2) {
            const std::int64_t left = x == 0 ? L - 1 : x - 1;
            const std::int64_t right = x == L - 1 ? 0 : x + 1;
            double sum = hp[base + left] + hp[base + right];
            for (int a = 1; a < d; ++a) {
                sum += hp[plus[static_cast<std::size_t>(a)] + x] +
                       hp[minus[static_cast<std::size_t>(a)] + x];
            }
            const std::int64_t n = base + x;
            hp[n] = sum * inv_coord + sd * noise(n);
        }
    }
}

}  // namespace

InterfaceState::InterfaceState(std::int64_t L, int d, std::vector<double> heights)
    : L_(L), d_(d), h_(std::move(heights)) {
    const std::int64_t n = checked_volume(L, d);
    if (static_cast<std::int64_t>(h_.size()) != n) {
        throw DomainError("InterfaceState: expected " + std::to_string(n) + " heights, got " +
                          std::to_string(h_.size()));
    }
    for (double v : h_) {
        if (!std::isfinite(v)) throw DomainError("InterfaceState: heights must be finite");
    }
}

InterfaceState InterfaceState::flat(std::int64_t L, int d, double value) {
    return InterfaceState(L, d, std::vector<double>(static_cast<std::size_t>(checked_volume(L, d)), value));
}

InterfaceState InterfaceState::equilibrium(std::int64_t L, int d, std::uint64_t seed,
                                           std::uint32_t replica) {
    return InterfaceState(L, d, sample_equilibrium(L, d, seed, replica));
}

int InterfaceState::site_parity(std::int64_t n) const {
    std::int64_t sum = 0;
    for (int a = 0; a < d_; ++a) {
        sum += n % L_;
        n /= L_;
    }
    return static_cast<int>(sum % 2);
}

void half_sweep(InterfaceState& state, const CounterRng& rng, int workers) {
    const std::int64_t L = state.L_;
    if (L % 2 != 0) {
        throw DomainError("half_sweep: L=" + std::to_string(L) + " must be even");
    }
    SweepGeometry g{L, state.d_, 1, std::vector<std::int64_t>(static_cast<std::size_t>(state.d_))};
    std::int64_t st = 1;
    for (int a = 0; a < state.d_; ++a) {
        g.stride[static_cast<std::size_t>(a)] = st;
        st *= L;
    }
    g.lines = st / L;
    const std::uint64_t s = state.lattice_time_ + 1;

    const std::int64_t max_workers = std::max<std::int64_t>(1, state.sites() / kMinSitesPerWorker);
    const auto w = static_cast<std::int64_t>(std::clamp<std::int64_t>(workers, 1, max_workers));
    if (w == 1) {
        sweep_block(state.h_, g, rng, s, 0, g.lines, 0, L);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(w));
        if (g.lines >= w) {
            for (std::int64_t k = 0; k < w; ++k) {
                const std::int64_t b = g.lines * k / w;
                const std::int64_t e = g.lines * (k + 1) / w;
                pool.emplace_back([&, b, e] { sweep_block(state.h_, g, rng, s, b, e, 0, L); });
            }
        } else {
            // d = 1 (or very short lines): split the axis-0 range at even boundaries
            for (std::int64_t k = 0; k < w; ++k) {
                const std::int64_t b = (L * k / w) & ~std::int64_t{1};
                const std::int64_t e = k + 1 == w ? L : (L * (k + 1) / w) & ~std::int64_t{1};
                pool.emplace_back([&, b, e] { sweep_block(state.h_, g, rng, s, 0, g.lines, b, e); });
            }
        }
    }
    state.lattice_time_ = s;
}

void sequential_update(InterfaceState& state, SequentialStream& stream, std::uint64_t n_micro) {
    const std::int64_t L = state.L_;
    const int d = state.d_;
    const auto n = static_cast<std::uint32_t>(state.sites());
    const double inv_coord = 1.0 / (2.0 * d);
    const double sd = std::sqrt(inv_coord);
    double* const hp = state.h_.data();

    if (d == 1) {
        for (std::uint64_t m = 0; m < n_micro; ++m) {
            const std::int64_t x = stream.next_index(n);
            const std::int64_t left = x == 0 ? L - 1 : x - 1;
            const std::int64_t right = x == L - 1 ? 0 : x + 1;
            const double z = stream.next_normal();
            hp[x] = 0.5 * (hp[left] + hp[right]) + sd * z;
        }
    } else {
        for (std::uint64_t m = 0; m < n_micro; ++m) {
            const std::int64_t site = stream.next_index(n);
            double sum = 0.0;
            std::int64_t rest = site;
            std::int64_t st = 1;
            for (int a = 0; a < d; ++a) {
                const std::int64_t c = rest % L;
                rest /= L;
                sum += hp[site + (c == L - 1 ? -(L - 1) * st : st)];
                sum += hp[site + (c == 0 ? (L - 1) * st : -st)];
                st *= L;
            }
            const double z = stream.next_normal();
            hp[site] = sum * inv_coord + sd * z;
        }
    }
    state.micro_updates_ += n_micro;
}

std::string_view to_string(Dynamics dynamics) {
    switch (dynamics) {
        case Dynamics::SublatticeParallel: return "sublattice";
        case Dynamics::RandomSequential: return "sequential";
    }
    return "unknown";
}

void SimConfig::validate() const {
    checked_volume(L, d);
    if (dynamics == Dynamics::SublatticeParallel && L % 2 != 0) {
        throw DomainError("SimConfig: sub-lattice dynamics needs even L, got " + std::to_string(L));
    }
    if (dynamics == Dynamics::RandomSequential && initial == InitialCondition::Equilibrium &&
        L % 2 != 0) {
        throw DomainError("SimConfig: the equilibrium sampler needs even L, got " + std::to_string(L));
    }
    if (warmup_rounds < 0 || measure_rounds < 0) {
        throw DomainError("SimConfig: warmup_rounds and measure_rounds must be >= 0");
    }
    if (snapshot_stride < 1) throw DomainError("SimConfig: snapshot_stride must be >= 1");
    if (replicas < 1) throw DomainError("SimConfig: replicas must be >= 1");
    if (workers < 1) throw DomainError("SimConfig: workers must be >= 1");
}

void advance(InterfaceState& state, Dynamics dynamics, const CounterRng& parallel_rng,
             SequentialStream& stream, std::int64_t units, int workers) {
    if (units < 0) throw DomainError("advance: units must be >= 0");
    if (dynamics == Dynamics::SublatticeParallel) {
        for (std::int64_t u = 0; u < 2 * units; ++u) half_sweep(state, parallel_rng, workers);
    } else {
        const auto per_unit = static_cast<std::uint64_t>(state.sites());
        for (std::int64_t u = 0; u < units; ++u) sequential_update(state, stream, per_unit);
    }
}

void run(const SimConfig& config, const SnapshotObserver& observer) {
    config.validate();
    for (int r = 0; r < config.replicas; ++r) {
        const auto replica = static_cast<std::uint32_t>(r);
        InterfaceState state = config.initial == InitialCondition::Equilibrium
                                   ? InterfaceState::equilibrium(config.L, config.d, config.seed, replica)
                                   : InterfaceState::flat(config.L, config.d);
        const CounterRng parallel_rng(config.seed, StreamTag::HalfSweep, replica);
        SequentialStream stream(config.seed, StreamTag::Sequential, replica);
        advance(state, config.dynamics, parallel_rng, stream, config.warmup_rounds, config.workers);

        std::int64_t index = 0;
        for (std::int64_t time = 0; time <= config.measure_rounds; time += config.snapshot_stride) {
            if (time > 0) {
                advance(state, config.dynamics, parallel_rng, stream, config.snapshot_stride,
                        config.workers);
            }
            observer(Snapshot{r, index++, time, state});
        }
    }
}

int workers_from_environment(int fallback) {
    const char* v = std::getenv("STCORR_WORKERS");
    if (v == nullptr) return fallback;
    int w = 0;
    const char* end = v + std::strlen(v);
    const auto [ptr, ec] = std::from_chars(v, end, w);
    if (ec != std::errc() || ptr != end || w < 1) return fallback;
    return w;
}

}  // namespace stcorr
