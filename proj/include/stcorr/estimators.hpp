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

// Empirical space-time correlations from a stream of height snapshots taken
// one unit of time apart. With S_tau(i) = h^tau_{i+2} - h^tau_i and
// D_tau(i) = h^{tau+1}_i - h^tau_i, the estimators averaged over all i and
// over origins o = 0 .. t1-1 are
//
//   g11(t, j) = < S_o(i)   S_{o+t}(i+j)   >
//   g22(t, j) = < D_o(i)   D_{o+t}(i+j)   >
//   g12(t, j) = < D_o(i)   S_{o+t}(i+j-1) >
//   g21(t, j) = < D_{o+t-1}(i) S_o(i+j-1) >   (t >= 1)
//
// Error bars are batch means over B contiguous segments of the ring: block b
// collects the products whose first factor sits at i in segment b, summed
// over all origins. Consecutive origins are strongly correlated (slow
// long-wavelength modes), so blocks of origins would not be independent;
// segments much longer than sqrt(t1) are.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stcorr/exact_correlations.hpp"
#include "stcorr/numeric.hpp"
#include "stcorr/simulator.hpp"

namespace stcorr {

inline constexpr int kDefaultBlocks = 20;
inline constexpr int kMinBlocks = 8;

/// First site of segment b when a ring of L sites is cut into n_blocks
/// contiguous segments of nearly equal length.
std::int64_t segment_begin(int b, std::int64_t L, int n_blocks);

class PairCorrelationAccumulator {
public:
    PairCorrelationAccumulator(CorrelationKind kind, std::int64_t L, std::vector<std::int64_t> lags,
                               std::int64_t j_max, std::int64_t origins, int blocks);

    [[nodiscard]] CorrelationKind kind() const { return kind_; }
    [[nodiscard]] std::int64_t length() const { return L_; }
    [[nodiscard]] const std::vector<std::int64_t>& lags() const { return lags_; }
    [[nodiscard]] std::int64_t j_max() const { return j_max_; }
    [[nodiscard]] std::int64_t origins() const { return origins_; }
    [[nodiscard]] int blocks() const { return blocks_; }
    [[nodiscard]] bool has_lag(std::int64_t t) const;

    /// Adds one origin's segment sums, laid out as sums[b (2 j_max + 1) + j + j_max].
    void add_origin(std::int64_t t, std::int64_t origin, std::span<const double> sums);

    /// Number of products accumulated at lag t (L per completed origin).
    [[nodiscard]] std::int64_t count(std::int64_t t) const;
    /// Origins completed at lag t.
    [[nodiscard]] std::int64_t origins_done(std::int64_t t) const;
    /// Throws InsufficientDataError when nothing was accumulated at (t, j).
    [[nodiscard]] double mean(std::int64_t t, std::int64_t j) const;
    /// Batch-means standard error. Throws InsufficientDataError with fewer
    /// than kMinBlocks non-empty blocks.
    [[nodiscard]] double standard_error(std::int64_t t, std::int64_t j) const;
    [[nodiscard]] int filled_blocks(std::int64_t t) const;
    /// Means of the non-empty blocks at (t, j), in block order. Linear
    /// combinations of cells get joint errors from these.
    [[nodiscard]] std::vector<double> block_means(std::int64_t t, std::int64_t j) const;

    /// Cell-wise sum; shapes must agree.
    void merge(const PairCorrelationAccumulator& other);

private:
    [[nodiscard]] std::size_t lag_index(std::int64_t t) const;
    [[nodiscard]] std::size_t cell(int block, std::size_t lag, std::int64_t j) const;

    CorrelationKind kind_;
    std::int64_t L_;
    std::vector<std::int64_t> lags_;
    std::int64_t j_max_;
    std::int64_t origins_;
    int blocks_;
    std::vector<CompensatedSum> sums_;      // [block][lag][j]
    std::vector<std::int64_t> counts_;      // [block][lag]
    std::vector<std::int64_t> done_;        // [lag]
};

class DisplacementAccumulator {
public:
    DisplacementAccumulator(std::int64_t sites, std::vector<std::int64_t> lags, std::int64_t origins,
                            int blocks);

    [[nodiscard]] const std::vector<std::int64_t>& lags() const { return lags_; }
    [[nodiscard]] std::int64_t origins() const { return origins_; }
    [[nodiscard]] int blocks() const { return blocks_; }

    /// Feeds the next snapshot (index = number of earlier calls).
    void push(std::span<const double> heights);
    [[nodiscard]] std::int64_t snapshots_needed() const;
    [[nodiscard]] bool complete() const { return seen_ >= snapshots_needed(); }

    [[nodiscard]] std::int64_t count(std::int64_t t) const;
    /// Site- and origin-averaged (h^{o+t}_i - h^o_i)^2.
    [[nodiscard]] double mean(std::int64_t t) const;
    [[nodiscard]] double standard_error(std::int64_t t) const;

    void merge(const DisplacementAccumulator& other);

private:
    [[nodiscard]] std::size_t lag_index(std::int64_t t) const;

    std::int64_t sites_;
    std::vector<std::int64_t> lags_;
    std::int64_t origins_;
    int blocks_;
    std::vector<CompensatedSum> sums_;   // [block][lag]
    std::vector<std::int64_t> counts_;   // [block][lag]
    std::vector<std::pair<std::int64_t, std::vector<double>>> live_;  // stored origins
    std::int64_t seen_ = 0;
};

struct EstimatorConfig {
    std::vector<CorrelationKind> kinds{CorrelationKind::SpaceSpace, CorrelationKind::TimeTime,
                                       CorrelationKind::SpaceTime};
    /// Lags to measure; empty means 0 .. t_max.
    std::vector<std::int64_t> lags;
    std::int64_t t_max = 0;
    std::int64_t j_max = 0;
    std::int64_t origins = 1;
    int blocks = kDefaultBlocks;
    /// Optional displacement lags, measured from the same origins.
    std::vector<std::int64_t> displacement_lags;

    [[nodiscard]] std::vector<std::int64_t> resolved_lags() const;
    void validate() const;
};

/// Streaming estimator for d = 1 snapshots. Uses O((max lag + 2) L) memory.
class CorrelationEstimator {
public:
    CorrelationEstimator(std::int64_t L, EstimatorConfig config);

    void push(std::span<const double> heights);
    [[nodiscard]] std::int64_t snapshots_needed() const;
    [[nodiscard]] std::int64_t snapshots_seen() const { return seen_; }
    [[nodiscard]] bool complete() const { return seen_ >= snapshots_needed(); }

    [[nodiscard]] const std::vector<PairCorrelationAccumulator>& accumulators() const { return accs_; }
    [[nodiscard]] const PairCorrelationAccumulator& accumulator(CorrelationKind kind) const;
    [[nodiscard]] const std::optional<DisplacementAccumulator>& displacement() const { return disp_; }

    void merge(const CorrelationEstimator& other);

private:
    void process(std::int64_t c);
    [[nodiscard]] std::size_t slot(std::int64_t tau) const;

    std::int64_t L_;
    EstimatorConfig config_;
    std::vector<std::int64_t> lags_;
    std::int64_t window_;
    std::vector<std::vector<double>> S_;
    std::vector<std::vector<double>> D_;
    std::vector<double> prev_;
    std::vector<PairCorrelationAccumulator> accs_;
    std::optional<DisplacementAccumulator> disp_;
    std::vector<double> row_;
    std::int64_t seen_ = 0;
};

/// sqrt(sum (m_b - mean)^2 / (B (B - 1))) over B >= kMinBlocks block means.
double batch_standard_error(std::span<const double> block_means);

/// sums[blk (2 j_max + 1) + j + j_max] = sum over i in segment blk of
/// a(i) b(i + j + shift), indices modulo L.
void circular_cross_sums(std::span<const double> a, std::span<const double> b, std::int64_t shift,
                         std::int64_t j_max, int blocks, std::span<double> sums);

/// Batch form over stored snapshots (d = 1). Uses all origins for which
/// every lag 0..t_max is available. Throws InsufficientDataError when fewer
/// than t_max + 2 snapshots are given.
PairCorrelationAccumulator accumulate(std::span<const std::vector<double>> snapshots,
                                      CorrelationKind kind, std::int64_t t_max, std::int64_t j_max,
                                      int blocks = kDefaultBlocks);

/// Estimate of E(h^t_0 - h^0_0)^2 averaged over sites and over all origins
/// o with o + t inside the snapshot range (any d).
double displacement_variance(std::span<const std::vector<double>> snapshots, std::int64_t t);

/// Batch-means standard error (free-function form).
double standard_error(const PairCorrelationAccumulator& acc, std::int64_t t, std::int64_t j);

/// Simulates `sim.replicas` replicas for exactly as long as the estimator
/// needs (stride one time unit) and merges the replicas in index order.
/// Correlations need d = 1; displacement lags work for any d.
CorrelationEstimator measure(SimConfig sim, const EstimatorConfig& config);

}  // namespace stcorr
