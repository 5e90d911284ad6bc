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

// Exact second moments of the d = 1 sub-lattice dynamics on a ring, started
// from the equilibrium measure, by pulling linear functionals of the heights
// back through the half-sweeps. Independent of the closed forms and of the
// dense space-time oracle: it uses only the update rule and the bridge
// variance Var(h_j - h_0) = j (L - j) / L of the initial state.

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "stcorr/exact_correlations.hpp"

namespace stcorr::test_support {

class PropagationOracle {
public:
    explicit PropagationOracle(std::int64_t L) : L_(L) {}

    /// A term c * h^{s}_i at lattice time s.
    struct Term {
        std::int64_t s;
        std::int64_t i;
        double c;
    };
    using Functional = std::vector<Term>;

    /// Cov(u, v) for functionals whose coefficients sum to zero at every time.
    [[nodiscard]] double covariance(const Functional& u, const Functional& v) const {
        const auto pu = pull_back(u);
        const auto pv = pull_back(v);
        double noise = 0.0;
        for (const auto& [key, c] : pu.noise) {
            const auto it = pv.noise.find(key);
            if (it != pv.noise.end()) noise += 0.5 * c * it->second;
        }
        double initial = 0.0;
        for (std::int64_t a = 0; a < L_; ++a) {
            if (pu.initial[a] == 0.0) continue;
            for (std::int64_t b = 0; b < L_; ++b) {
                if (pv.initial[b] == 0.0) continue;
                const std::int64_t r = wrap(b - a);
                initial -= 0.5 * pu.initial[a] * pv.initial[b] * static_cast<double>(r * (L_ - r)) /
                           static_cast<double>(L_);
            }
        }
        return initial + noise;
    }

    /// Site-averaged estimator target for the given kind, with snapshots at
    /// every second half-sweep: snapshot tau is lattice time 2 tau.
    [[nodiscard]] double pair_correlation(CorrelationKind kind, std::int64_t t, std::int64_t j) const {
        double sum = 0.0;
        for (std::int64_t i = 0; i < 2; ++i) {
            Functional u, v;
            switch (kind) {
                case CorrelationKind::SpaceSpace:
                    u = space(0, i);
                    v = space(t, i + j);
                    break;
                case CorrelationKind::TimeTime:
                    u = time(0, i);
                    v = time(t, i + j);
                    break;
                case CorrelationKind::SpaceTime:
                    u = time(0, i);
                    v = space(t, i + j - 1);
                    break;
                case CorrelationKind::TimeSpace:
                    u = time(t - 1, i);
                    v = space(0, i + j - 1);
                    break;
            }
            sum += covariance(u, v);
        }
        return sum / 2.0;
    }

private:
    struct Pulled {
        std::vector<double> initial;
        std::map<std::pair<std::int64_t, std::int64_t>, double> noise;
    };

    [[nodiscard]] std::int64_t wrap(std::int64_t i) const { return ((i % L_) + L_) % L_; }

    [[nodiscard]] Functional space(std::int64_t tau, std::int64_t i) const {
        return {{2 * tau, wrap(i + 2), 1.0}, {2 * tau, wrap(i), -1.0}};
    }
    [[nodiscard]] Functional time(std::int64_t tau, std::int64_t i) const {
        return {{2 * tau + 2, wrap(i), 1.0}, {2 * tau, wrap(i), -1.0}};
    }

    [[nodiscard]] Pulled pull_back(const Functional& f) const {
        std::int64_t top = 0;
        for (const auto& term : f) top = std::max(top, term.s);
        Pulled out;
        std::vector<double> c(static_cast<std::size_t>(L_), 0.0);
        for (std::int64_t s = top; s >= 1; --s) {
            for (const auto& term : f) {
                if (term.s == s) c[term.i] += term.c;
            }
            std::vector<double> prev(c.size(), 0.0);
            for (std::int64_t i = 0; i < L_; ++i) {
                if (c[i] == 0.0) continue;
                if ((i + s) % 2 == 0) {
                    prev[wrap(i - 1)] += 0.5 * c[i];
                    prev[wrap(i + 1)] += 0.5 * c[i];
                    out.noise[{s, i}] += c[i];
                } else {
                    prev[i] += c[i];
                }
            }
            c = std::move(prev);
        }
        for (const auto& term : f) {
            if (term.s == 0) c[term.i] += term.c;
        }
        out.initial = std::move(c);
        return out;
    }

    std::int64_t L_;
};

}  // namespace stcorr::test_support
