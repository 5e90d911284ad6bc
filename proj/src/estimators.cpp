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

#include "stcorr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stcorr/errors.hpp"

namespace stcorr {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

std::vector<std::int64_t> normalized_lags(std::vector<std::int64_t> lags) {
    if (lags.empty()) throw DomainError("estimator: lag list is empty");
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    if (lags.front() < 0) throw DomainError("estimator: lags must be >= 0");
    return lags;
}

int checked_blocks(int blocks, std::int64_t sites, std::int64_t origins) {
    if (origins < 1) throw DomainError("estimator: need at least one origin");
    if (blocks < 1) throw DomainError("estimator: need at least one block");
    return static_cast<int>(std::min<std::int64_t>(blocks, sites));
}

double dot_shifted(const double* a, const double* b, std::int64_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

double batch_standard_error(std::span<const double> block_means) {
    if (static_cast<int>(block_means.size()) < kMinBlocks) {
        throw InsufficientDataError("standard error needs >= " + std::to_string(kMinBlocks) +
                                    " blocks, have " + std::to_string(block_means.size()));
    }
    const auto b = static_cast<double>(block_means.size());
    double m = 0.0;
    for (double x : block_means) m += x;
    m /= b;
    double ss = 0.0;
    for (double x : block_means) ss += (x - m) * (x - m);
    return std::sqrt(ss / (b * (b - 1.0)));
}

std::int64_t segment_begin(int b, std::int64_t L, int n_blocks) {
    return L * b / n_blocks;
}

// ---------------------------------------------------------------------------

PairCorrelationAccumulator::PairCorrelationAccumulator(CorrelationKind kind, std::int64_t L,
                                                       std::vector<std::int64_t> lags,
                                                       std::int64_t j_max, std::int64_t origins,
                                                       int blocks)
    : kind_(kind), L_(L), lags_(normalized_lags(std::move(lags))), j_max_(j_max), origins_(origins),
      blocks_(checked_blocks(blocks, L, origins)) {
    if (L < 4) throw DomainError("PairCorrelationAccumulator: L must be >= 4");
    if (j_max < 0 || 2 * j_max + 1 > L) {
        throw DomainError("PairCorrelationAccumulator: need 0 <= j_max and 2 j_max + 1 <= L");
    }
    const auto width = static_cast<std::size_t>(2 * j_max_ + 1);
    sums_.resize(static_cast<std::size_t>(blocks_) * lags_.size() * width);
    counts_.assign(static_cast<std::size_t>(blocks_) * lags_.size(), 0);
    done_.assign(lags_.size(), 0);
}

bool PairCorrelationAccumulator::has_lag(std::int64_t t) const {
    return std::binary_search(lags_.begin(), lags_.end(), t);
}

std::size_t PairCorrelationAccumulator::lag_index(std::int64_t t) const {
    const auto it = std::lower_bound(lags_.begin(), lags_.end(), t);
    if (it == lags_.end() || *it != t) {
        throw InsufficientDataError(std::string(short_name(kind_)) + ": lag t=" + std::to_string(t) +
                                    " was not measured");
    }
    return static_cast<std::size_t>(it - lags_.begin());
}

std::size_t PairCorrelationAccumulator::cell(int block, std::size_t lag, std::int64_t j) const {
    const auto width = static_cast<std::size_t>(2 * j_max_ + 1);
    return (static_cast<std::size_t>(block) * lags_.size() + lag) * width +
           static_cast<std::size_t>(j + j_max_);
}

void PairCorrelationAccumulator::add_origin(std::int64_t t, std::int64_t origin,
                                            std::span<const double> sums) {
    if (origin < 0 || origin >= origins_) {
        throw DomainError("add_origin: origin " + std::to_string(origin) + " outside [0, " +
                          std::to_string(origins_) + ")");
    }
    const std::int64_t width = 2 * j_max_ + 1;
    if (static_cast<std::int64_t>(sums.size()) != blocks_ * width) {
        throw DomainError("add_origin: expected blocks * (2 j_max + 1) sums");
    }
    const std::size_t lag = lag_index(t);
    for (int b = 0; b < blocks_; ++b) {
        for (std::int64_t j = -j_max_; j <= j_max_; ++j) {
            sums_[cell(b, lag, j)].add(sums[static_cast<std::size_t>(b * width + j + j_max_)]);
        }
        counts_[static_cast<std::size_t>(b) * lags_.size() + lag] +=
            segment_begin(b + 1, L_, blocks_) - segment_begin(b, L_, blocks_);
    }
    ++done_[lag];
}

std::int64_t PairCorrelationAccumulator::origins_done(std::int64_t t) const {
    return done_[lag_index(t)];
}

std::int64_t PairCorrelationAccumulator::count(std::int64_t t) const {
    const std::size_t lag = lag_index(t);
    std::int64_t n = 0;
    for (int b = 0; b < blocks_; ++b) n += counts_[static_cast<std::size_t>(b) * lags_.size() + lag];
    return n;
}

double PairCorrelationAccumulator::mean(std::int64_t t, std::int64_t j) const {
    if (j < -j_max_ || j > j_max_) {
        throw InsufficientDataError("offset j=" + std::to_string(j) + " outside [-" +
                                    std::to_string(j_max_) + ", " + std::to_string(j_max_) + "]");
    }
    const std::size_t lag = lag_index(t);
    CompensatedSum total;
    std::int64_t n = 0;
    for (int b = 0; b < blocks_; ++b) {
        total += sums_[cell(b, lag, j)];
        n += counts_[static_cast<std::size_t>(b) * lags_.size() + lag];
    }
    if (n == 0) {
        throw InsufficientDataError(std::string(short_name(kind_)) + ": no origins accumulated at t=" +
                                    std::to_string(t));
    }
    return total.value() / static_cast<double>(n);
}

int PairCorrelationAccumulator::filled_blocks(std::int64_t t) const {
    const std::size_t lag = lag_index(t);
    int filled = 0;
    for (int b = 0; b < blocks_; ++b) {
        if (counts_[static_cast<std::size_t>(b) * lags_.size() + lag] > 0) ++filled;
    }
    return filled;
}

std::vector<double> PairCorrelationAccumulator::block_means(std::int64_t t, std::int64_t j) const {
    (void)mean(t, j);  // range checks
    const std::size_t lag = lag_index(t);
    std::vector<double> means;
    for (int b = 0; b < blocks_; ++b) {
        const std::int64_t n = counts_[static_cast<std::size_t>(b) * lags_.size() + lag];
        if (n > 0) means.push_back(sums_[cell(b, lag, j)].value() / static_cast<double>(n));
    }
    return means;
}

double PairCorrelationAccumulator::standard_error(std::int64_t t, std::int64_t j) const {
    return batch_standard_error(block_means(t, j));
}

void PairCorrelationAccumulator::merge(const PairCorrelationAccumulator& other) {
    if (other.kind_ != kind_ || other.L_ != L_ || other.lags_ != lags_ || other.j_max_ != j_max_ ||
        other.origins_ != origins_ || other.blocks_ != blocks_) {
        throw DomainError("PairCorrelationAccumulator::merge: shapes differ");
    }
    for (std::size_t k = 0; k < sums_.size(); ++k) sums_[k] += other.sums_[k];
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    for (std::size_t k = 0; k < done_.size(); ++k) done_[k] += other.done_[k];
}

// ---------------------------------------------------------------------------

DisplacementAccumulator::DisplacementAccumulator(std::int64_t sites, std::vector<std::int64_t> lags,
                                                 std::int64_t origins, int blocks)
    : sites_(sites), lags_(normalized_lags(std::move(lags))), origins_(origins),
      blocks_(checked_blocks(blocks, sites, origins)) {
    sums_.resize(static_cast<std::size_t>(blocks_) * lags_.size());
    counts_.assign(static_cast<std::size_t>(blocks_) * lags_.size(), 0);
}

std::int64_t DisplacementAccumulator::snapshots_needed() const {
    return origins_ + lags_.back();
}

std::size_t DisplacementAccumulator::lag_index(std::int64_t t) const {
    const auto it = std::lower_bound(lags_.begin(), lags_.end(), t);
    if (it == lags_.end() || *it != t) {
        throw InsufficientDataError("displacement: lag t=" + std::to_string(t) + " was not measured");
    }
    return static_cast<std::size_t>(it - lags_.begin());
}

void DisplacementAccumulator::push(std::span<const double> heights) {
    if (static_cast<std::int64_t>(heights.size()) != sites_) {
        throw DomainError("DisplacementAccumulator: expected " + std::to_string(sites_) + " heights");
    }
    const std::int64_t tau = seen_++;
    if (tau < origins_) live_.emplace_back(tau, std::vector<double>(heights.begin(), heights.end()));

    for (const auto& [o, h0] : live_) {
        const std::int64_t t = tau - o;
        if (!std::binary_search(lags_.begin(), lags_.end(), t)) continue;
        const std::size_t lag = lag_index(t);
        for (int b = 0; b < blocks_; ++b) {
            const auto begin = static_cast<std::size_t>(segment_begin(b, sites_, blocks_));
            const auto end = static_cast<std::size_t>(segment_begin(b + 1, sites_, blocks_));
            double s0 = 0.0, s1 = 0.0;
            std::size_t i = begin;
            for (; i + 2 <= end; i += 2) {
                const double x = heights[i] - h0[i];
                const double y = heights[i + 1] - h0[i + 1];
                s0 += x * x;
                s1 += y * y;
            }
            for (; i < end; ++i) s0 += (heights[i] - h0[i]) * (heights[i] - h0[i]);
            const std::size_t k = static_cast<std::size_t>(b) * lags_.size() + lag;
            sums_[k].add(s0 + s1);
            counts_[k] += static_cast<std::int64_t>(end - begin);
        }
    }
    std::erase_if(live_, [&](const auto& e) { return e.first + lags_.back() <= tau; });
}

std::int64_t DisplacementAccumulator::count(std::int64_t t) const {
    const std::size_t lag = lag_index(t);
    std::int64_t n = 0;
    for (int b = 0; b < blocks_; ++b) n += counts_[static_cast<std::size_t>(b) * lags_.size() + lag];
    return n;
}

double DisplacementAccumulator::mean(std::int64_t t) const {
    const std::size_t lag = lag_index(t);
    CompensatedSum total;
    std::int64_t n = 0;
    for (int b = 0; b < blocks_; ++b) {
        total += sums_[static_cast<std::size_t>(b) * lags_.size() + lag];
        n += counts_[static_cast<std::size_t>(b) * lags_.size() + lag];
    }
    if (n == 0) {
        throw InsufficientDataError("displacement: no origins accumulated at t=" + std::to_string(t));
    }
    return total.value() / static_cast<double>(n);
}

double DisplacementAccumulator::standard_error(std::int64_t t) const {
    const std::size_t lag = lag_index(t);
    std::vector<double> means;
    for (int b = 0; b < blocks_; ++b) {
        const std::size_t k = static_cast<std::size_t>(b) * lags_.size() + lag;
        if (counts_[k] > 0) means.push_back(sums_[k].value() / static_cast<double>(counts_[k]));
    }
    return batch_standard_error(means);
}

void DisplacementAccumulator::merge(const DisplacementAccumulator& other) {
    if (other.sites_ != sites_ || other.lags_ != lags_ || other.origins_ != origins_ ||
        other.blocks_ != blocks_) {
        throw DomainError("DisplacementAccumulator::merge: shapes differ");
    }
    for (std::size_t k = 0; k < sums_.size(); ++k) sums_[k] += other.sums_[k];
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
}

// ---------------------------------------------------------------------------

std::vector<std::int64_t> EstimatorConfig::resolved_lags() const {
    if (!lags.empty()) return normalized_lags(lags);
    std::vector<std::int64_t> out;
    for (std::int64_t t = 0; t <= t_max; ++t) out.push_back(t);
    return out;
}

void EstimatorConfig::validate() const {
    if (t_max < 0 || j_max < 0) throw DomainError("EstimatorConfig: t_max and j_max must be >= 0");
    if (origins < 1) throw DomainError("EstimatorConfig: origins must be >= 1");
    if (blocks < 1) throw DomainError("EstimatorConfig: blocks must be >= 1");
    if (!lags.empty()) (void)normalized_lags(lags);
    if (!displacement_lags.empty()) (void)normalized_lags(displacement_lags);
}

void circular_cross_sums(std::span<const double> a, std::span<const double> b, std::int64_t shift,
                         std::int64_t j_max, int blocks, std::span<double> sums) {
    const auto L = static_cast<std::int64_t>(a.size());
    const std::int64_t width = 2 * j_max + 1;
    for (int blk = 0; blk < blocks; ++blk) {
        const std::int64_t begin = segment_begin(blk, L, blocks);
        const std::int64_t end = segment_begin(blk + 1, L, blocks);
        for (std::int64_t j = -j_max; j <= j_max; ++j) {
            const std::int64_t off = mod(j + shift, L);
            // i + off stays below L for i < L - off; beyond that it wraps to i + off - L
            const std::int64_t split = std::clamp(L - off, begin, end);
            const double head = dot_shifted(a.data() + begin, b.data() + begin + off, split - begin);
            const double tail = dot_shifted(a.data() + split, b.data() + split + off - L, end - split);
            sums[static_cast<std::size_t>(blk * width + j + j_max)] = head + tail;
        }
    }
}

CorrelationEstimator::CorrelationEstimator(std::int64_t L, EstimatorConfig config)
    : L_(L), config_(std::move(config)) {
    config_.validate();
    lags_ = config_.resolved_lags();
    window_ = lags_.back() + 1;
    if (!config_.kinds.empty()) {
        S_.assign(static_cast<std::size_t>(window_), std::vector<double>(static_cast<std::size_t>(L)));
        D_.assign(static_cast<std::size_t>(window_), std::vector<double>(static_cast<std::size_t>(L)));
    }
    for (auto kind : config_.kinds) {
        accs_.emplace_back(kind, L, lags_, config_.j_max, config_.origins, config_.blocks);
    }
    if (!config_.displacement_lags.empty()) {
        disp_.emplace(L, config_.displacement_lags, config_.origins, config_.blocks);
    }
    if (!accs_.empty()) {
        row_.resize(static_cast<std::size_t>(accs_.front().blocks() * (2 * config_.j_max + 1)));
    }
}

std::int64_t CorrelationEstimator::snapshots_needed() const {
    std::int64_t n = 0;
    if (!accs_.empty()) n = config_.origins + lags_.back() + 1;
    if (disp_) n = std::max(n, disp_->snapshots_needed());
    return n;
}

std::size_t CorrelationEstimator::slot(std::int64_t tau) const {
    return static_cast<std::size_t>(tau % window_);
}

const PairCorrelationAccumulator& CorrelationEstimator::accumulator(CorrelationKind kind) const {
    for (const auto& a : accs_) {
        if (a.kind() == kind) return a;
    }
    throw InsufficientDataError(std::string("estimator was not configured for ") +
                                std::string(short_name(kind)));
}

void CorrelationEstimator::push(std::span<const double> heights) {
    if (static_cast<std::int64_t>(heights.size()) != L_) {
        throw DomainError("CorrelationEstimator: expected " + std::to_string(L_) + " heights");
    }
    const std::int64_t tau = seen_++;
    if (disp_) disp_->push(heights);
    if (accs_.empty()) return;

    if (tau > 0) {
        auto& d = D_[slot(tau - 1)];
        for (std::int64_t i = 0; i < L_; ++i) {
            d[static_cast<std::size_t>(i)] = heights[static_cast<std::size_t>(i)] - prev_[static_cast<std::size_t>(i)];
        }
        process(tau - 1);
    }
    auto& s = S_[slot(tau)];
    for (std::int64_t i = 0; i < L_; ++i) {
        s[static_cast<std::size_t>(i)] = heights[static_cast<std::size_t>((i + 2) % L_)] -
                                         heights[static_cast<std::size_t>(i)];
    }
    prev_.assign(heights.begin(), heights.end());
}

// S and D are available for times c - window + 1 .. c.
void CorrelationEstimator::process(std::int64_t c) {
    const std::int64_t jm = config_.j_max;
    const int nb = accs_.front().blocks();
    for (auto t : lags_) {
        const std::int64_t o = c - t;
        if (o < 0 || o >= config_.origins) continue;
        for (auto& acc : accs_) {
            switch (acc.kind()) {
                case CorrelationKind::SpaceSpace:
                    circular_cross_sums(S_[slot(o)], S_[slot(c)], 0, jm, nb, row_);
                    break;
                case CorrelationKind::TimeTime:
                    circular_cross_sums(D_[slot(o)], D_[slot(c)], 0, jm, nb, row_);
                    break;
                case CorrelationKind::SpaceTime:
                    circular_cross_sums(D_[slot(o)], S_[slot(c)], -1, jm, nb, row_);
                    break;
                case CorrelationKind::TimeSpace:
                    if (t < 1) continue;
                    circular_cross_sums(D_[slot(c - 1)], S_[slot(o)], -1, jm, nb, row_);
                    break;
            }
            acc.add_origin(t, o, row_);
        }
    }
}

void CorrelationEstimator::merge(const CorrelationEstimator& other) {
    if (other.accs_.size() != accs_.size() || other.disp_.has_value() != disp_.has_value()) {
        throw DomainError("CorrelationEstimator::merge: configurations differ");
    }
    for (std::size_t k = 0; k < accs_.size(); ++k) accs_[k].merge(other.accs_[k]);
    if (disp_) disp_->merge(*other.disp_);
}

// ---------------------------------------------------------------------------

PairCorrelationAccumulator accumulate(std::span<const std::vector<double>> snapshots,
                                      CorrelationKind kind, std::int64_t t_max, std::int64_t j_max,
                                      int blocks) {
    if (t_max < 0) throw DomainError("accumulate: t_max must be >= 0");
    const auto n = static_cast<std::int64_t>(snapshots.size());
    if (n < t_max + 2) {
        throw InsufficientDataError("accumulate: need snapshots 0.." + std::to_string(t_max + 1) +
                                    " for t_max=" + std::to_string(t_max) + ", missing " +
                                    std::to_string(n) + ".." + std::to_string(t_max + 1));
    }
    EstimatorConfig config;
    config.kinds = {kind};
    config.t_max = t_max;
    config.j_max = j_max;
    config.origins = n - t_max - 1;
    config.blocks = blocks;
    CorrelationEstimator est(static_cast<std::int64_t>(snapshots.front().size()), config);
    for (const auto& h : snapshots) {
        if (est.complete()) break;
        est.push(h);
    }
    return est.accumulator(kind);
}

double displacement_variance(std::span<const std::vector<double>> snapshots, std::int64_t t) {
    if (t < 0) throw DomainError("displacement_variance: t must be >= 0");
    const auto n = static_cast<std::int64_t>(snapshots.size());
    if (n < t + 1) {
        throw InsufficientDataError("displacement_variance: need snapshots 0.." + std::to_string(t) +
                                    ", missing " + std::to_string(n) + ".." + std::to_string(t));
    }
    CompensatedSum total;
    std::int64_t count = 0;
    for (std::int64_t o = 0; o + t < n; ++o) {
        const auto& a = snapshots[static_cast<std::size_t>(o)];
        const auto& b = snapshots[static_cast<std::size_t>(o + t)];
        if (a.size() != b.size()) throw DomainError("displacement_variance: snapshot sizes differ");
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (b[i] - a[i]) * (b[i] - a[i]);
        total.add(s);
        count += static_cast<std::int64_t>(a.size());
    }
    return total.value() / static_cast<double>(count);
}

double standard_error(const PairCorrelationAccumulator& acc, std::int64_t t, std::int64_t j) {
    return acc.standard_error(t, j);
}

CorrelationEstimator measure(SimConfig sim, const EstimatorConfig& config) {
    if (!config.kinds.empty() && sim.d != 1) {
        throw DomainError("measure: pair correlations are implemented for d = 1 only");
    }
    std::int64_t volume = 1;
    for (int a = 0; a < sim.d; ++a) volume *= sim.L;

    std::optional<CorrelationEstimator> total;
    std::optional<CorrelationEstimator> current;
    int current_replica = -1;
    auto flush = [&] {
        if (!current) return;
        if (total) {
            total->merge(*current);
        } else {
            total = std::move(current);
        }
        current.reset();
    };

    sim.snapshot_stride = 1;
    sim.measure_rounds = CorrelationEstimator(volume, config).snapshots_needed() - 1;
    run(sim, [&](const Snapshot& snap) {
        if (snap.replica != current_replica) {
            flush();
            current.emplace(volume, config);
            current_replica = snap.replica;
        }
        current->push(snap.state.heights());
    });
    flush();
    return std::move(*total);
}

}  // namespace stcorr
