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

#include "stcorr/gaussian_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "stcorr/errors.hpp"

namespace stcorr {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

constexpr double kSingularRcond = 1e-14;

// Adds c c^T to A for a sparse coefficient vector with possibly repeated
// indices (they are merged first).
void add_rank_one(Eigen::MatrixXd& A, std::vector<std::pair<Eigen::Index, double>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Eigen::Index, double>> merged;
    for (const auto& [idx, w] : terms) {
        if (!merged.empty() && merged.back().first == idx) {
            merged.back().second += w;
        } else {
            merged.emplace_back(idx, w);
        }
    }
    for (const auto& [a, wa] : merged) {
        for (const auto& [b, wb] : merged) A(a, b) += wa * wb;
    }
}

}  // namespace

QuadraticFormSpec QuadraticFormSpec::make(FieldKind kind, std::int64_t T, std::int64_t L) {
    if (T < 2 || T % 2 != 0 || L < 2 || L % 2 != 0) {
        throw DomainError("QuadraticFormSpec: T=" + std::to_string(T) + ", L=" +
                          std::to_string(L) + " must be even and positive");
    }
    if (T * L / 2 > kMaxDenseVariables) {
        throw FiniteSizeError("QuadraticFormSpec: " + std::to_string(T * L / 2) +
                              " variables exceed the dense cap of " +
                              std::to_string(kMaxDenseVariables));
    }
    return QuadraticFormSpec{kind, T, L};
}

Eigen::Index QuadraticFormSpec::index(std::int64_t t, std::int64_t i) const {
    const std::int64_t tt = mod(t, T);
    const std::int64_t ii = mod(i, L);
    if ((tt + ii) % 2 != 0) {
        throw DomainError("QuadraticFormSpec::index: site (" + std::to_string(t) + "," +
                          std::to_string(i) + ") is not on the even sub-lattice");
    }
    return static_cast<Eigen::Index>(tt * (L / 2) + ii / 2);
}

Eigen::MatrixXd build_form(const QuadraticFormSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.variables());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    const bool periodic = spec.kind == FieldKind::Periodic;
    for (std::int64_t t = periodic ? 0 : 1; t < spec.T; ++t) {
        for (std::int64_t i = t % 2; i < spec.L; i += 2) {
            // (h^t_i - h^{t-1}_{i-1}/2 - h^{t-1}_{i+1}/2)^2
            add_rank_one(A, {{spec.index(t, i), 1.0},
                             {spec.index(t - 1, i - 1), -0.5},
                             {spec.index(t - 1, i + 1), -0.5}});
        }
    }
    if (!periodic) {
        // (1/4)(h^0_i - h^0_{i+2})^2 on the first slice
        for (std::int64_t i = 0; i < spec.L; i += 2) {
            add_rank_one(A, {{spec.index(0, i), 0.5}, {spec.index(0, i + 2), -0.5}});
        }
    }
    return A;
}

Eigen::MatrixXd build_equilibrium_form(std::int64_t L) {
    if (L < 2 || L % 2 != 0) throw DomainError("build_equilibrium_form: L must be even");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L, L);
    const double w = std::sqrt(0.5);
    for (std::int64_t i = 0; i < L; ++i) {
        add_rank_one(A, {{static_cast<Eigen::Index>(mod(i + 1, L)), w},
                         {static_cast<Eigen::Index>(i), -w}});
    }
    return A;
}

int kernel_dimension(const Eigen::MatrixXd& A, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    int count = 0;
    for (Eigen::Index a = 0; a < ev.size(); ++a) {
        if (std::abs(ev(a)) <= tol * scale) ++count;
    }
    return count;
}

double CovarianceMatrix::gradient_covariance(Eigen::Index a, Eigen::Index b, Eigen::Index c,
                                             Eigen::Index e) const {
    return values(a, c) - values(a, e) - values(b, c) + values(b, e);
}

namespace {

Eigen::MatrixXd pinned_double_form(const Eigen::MatrixXd& A, Eigen::Index pinned) {
    const Eigen::Index n = A.rows();
    if (pinned < 0 || pinned >= n) throw DomainError("covariance: pinned index out of range");
    Eigen::MatrixXd R(n - 1, n - 1);
    const Eigen::Index p = pinned;
    const Eigen::Index q = n - 1 - pinned;
    R.topLeftCorner(p, p) = A.topLeftCorner(p, p);
    R.topRightCorner(p, q) = A.topRightCorner(p, q);
    R.bottomLeftCorner(q, p) = A.bottomLeftCorner(q, p);
    R.bottomRightCorner(q, q) = A.bottomRightCorner(q, q);
    R *= 2.0;
    return R;
}

Eigen::Index reduced_index(Eigen::Index full, Eigen::Index pinned) {
    return full < pinned ? full : full - 1;
}

}  // namespace

CovarianceMatrix covariance(const Eigen::MatrixXd& A, Eigen::Index pinned) {
    const Eigen::Index n = A.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(pinned_double_form(A, pinned));
    const double rc = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    if (!(rc > kSingularRcond)) {
        throw NumericError("covariance: pinned form is singular (rcond " + std::to_string(rc) +
                           "); the kernel is larger than the constants");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
    CovarianceMatrix out;
    out.values = Eigen::MatrixXd::Zero(n, n);
    out.pinned = pinned;
    out.reciprocal_condition = rc;
    for (Eigen::Index a = 0; a < n; ++a) {
        if (a == pinned) continue;
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == pinned) continue;
            out.values(a, b) = inv(reduced_index(a, pinned), reduced_index(b, pinned));
        }
    }
    return out;
}

SpaceTimeOracle::SpaceTimeOracle(const QuadraticFormSpec& spec, Eigen::Index pinned)
    : spec_(spec), pinned_(pinned) {
    {
        Eigen::MatrixXd reduced = pinned_double_form(build_form(spec_), pinned_);
        llt_.compute(reduced);
    }
    rcond_ = llt_.info() == Eigen::Success ? llt_.rcond() : 0.0;
    if (!(rcond_ > kSingularRcond)) {
        throw NumericError("SpaceTimeOracle: pinned form is singular (rcond " +
                           std::to_string(rcond_) + ")");
    }
}

Eigen::VectorXd SpaceTimeOracle::to_dense(const LinearFunctional& u) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec_.variables()) - 1);
    for (const auto& s : u) {
        const Eigen::Index idx = spec_.index(s.t, s.i);
        if (idx == pinned_) continue;
        x(reduced_index(idx, pinned_)) += s.weight;
    }
    return x;
}

Eigen::VectorXd SpaceTimeOracle::apply_covariance(const LinearFunctional& u) const {
    return llt_.solve(to_dense(u));
}

double SpaceTimeOracle::dot(const LinearFunctional& u, const Eigen::VectorXd& w) const {
    double s = 0.0;
    for (const auto& site : u) {
        const Eigen::Index idx = spec_.index(site.t, site.i);
        if (idx == pinned_) continue;
        s += site.weight * w(reduced_index(idx, pinned_));
    }
    return s;
}

double SpaceTimeOracle::covariance(const LinearFunctional& u, const LinearFunctional& v) const {
    return dot(u, apply_covariance(v));
}

std::pair<LinearFunctional, LinearFunctional> correlation_functionals(CorrelationKind kind,
                                                                      std::int64_t t,
                                                                      std::int64_t j) {
    const auto q = CorrelationQuery::make(kind, t, j);
    const std::int64_t s = 2 * q.t;  // lattice time
    switch (kind) {
        case CorrelationKind::SpaceSpace:
            return {{{s, j + 2, 1.0}, {s, j, -1.0}}, {{0, 2, 1.0}, {0, 0, -1.0}}};
        case CorrelationKind::TimeTime:
            return {{{s + 2, j, 1.0}, {s, j, -1.0}}, {{2, 0, 1.0}, {0, 0, -1.0}}};
        case CorrelationKind::SpaceTime:
            return {{{s, j + 1, 1.0}, {s, j - 1, -1.0}}, {{2, 0, 1.0}, {0, 0, -1.0}}};
        case CorrelationKind::TimeSpace:
            return {{{0, j + 1, 1.0}, {0, j - 1, -1.0}}, {{s, 0, 1.0}, {s - 2, 0, -1.0}}};
    }
    return {};
}

void check_fits(const QuadraticFormSpec& spec, std::int64_t t, std::int64_t j) {
    if (2 * t + std::llabs(j) + 4 > std::min(spec.T, spec.L) / 2) {
        throw FiniteSizeError("pair correlation (t=" + std::to_string(t) + ", j=" +
                              std::to_string(j) + ") does not fit a " + std::to_string(spec.T) +
                              "x" + std::to_string(spec.L) + " torus");
    }
}

double SpaceTimeOracle::pair_correlation(CorrelationKind kind, std::int64_t t, std::int64_t j) const {
    const std::int64_t js[] = {j};
    return pair_correlations(kind, t, js).front();
}

std::vector<double> SpaceTimeOracle::pair_correlations(CorrelationKind kind, std::int64_t t,
                                                       std::span<const std::int64_t> js) const {
    std::vector<double> out;
    out.reserve(js.size());
    Eigen::VectorXd w;
    for (const auto j : js) {
        check_fits(spec_, t, j);
        auto [moving, reference] = correlation_functionals(kind, t, j);
        if (w.size() == 0) w = apply_covariance(reference);
        out.push_back(dot(moving, w));
    }
    return out;
}

double spacetime_pair_correlation(const QuadraticFormSpec& spec, CorrelationKind kind,
                                  std::int64_t t, std::int64_t j) {
    check_fits(spec, t, j);
    return SpaceTimeOracle(spec).pair_correlation(kind, t, j);
}

double dense_mode_variance(const QuadraticFormSpec& spec, const CovarianceMatrix& cov,
                           const ModeIndex& mode) {
    const auto n = static_cast<Eigen::Index>(spec.variables());
    Eigen::VectorXd c(n);
    Eigen::VectorXd s(n);
    for (std::int64_t t = 0; t < spec.T; ++t) {
        for (std::int64_t i = t % 2; i < spec.L; i += 2) {
            // phase 2 pi (k i / L + nu t / T) over the common denominator L T
            const std::int64_t num = mode.k.at(0) * i * spec.T + mode.nu * t * spec.L;
            const Eigen::Index idx = spec.index(t, i);
            c(idx) = cos_2pi_frac(num, spec.L * spec.T);
            s(idx) = sin_2pi_frac(num, spec.L * spec.T);
        }
    }
    const double quad = c.dot(cov.values * c) + s.dot(cov.values * s);
    return quad / static_cast<double>(spec.L * spec.T);
}

double covariance_gap(const CovarianceMatrix& a, const CovarianceMatrix& b,
                      Eigen::Index window_variables) {
    if (a.pinned != b.pinned) throw DomainError("covariance_gap: different pinned variables");
    if (window_variables > a.values.rows() || window_variables > b.values.rows()) {
        throw DomainError("covariance_gap: window exceeds the covariance size");
    }
    return (a.values.topLeftCorner(window_variables, window_variables) -
            b.values.topLeftCorner(window_variables, window_variables))
        .cwiseAbs()
        .maxCoeff();
}

double prop2_gap(std::int64_t T, std::int64_t T1, std::int64_t L) {
    if (T < T1) throw DomainError("prop2_gap: requires T >= T1");
    const auto periodic = QuadraticFormSpec::make(FieldKind::Periodic, T, L);
    const auto free = QuadraticFormSpec::make(FieldKind::Free, T1, L);
    const auto cov_periodic = covariance(build_form(periodic), 0);
    const auto cov_free = covariance(build_form(free), 0);
    return covariance_gap(cov_periodic, cov_free, static_cast<Eigen::Index>(free.variables()));
}

}  // namespace stcorr
