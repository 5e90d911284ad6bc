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

// Dense ground truth for the space-time Gaussian field.
//
// The field lives on the even space-time sub-lattice {(t, i): t + i even}
// of a finite torus. Its density is exp(-H) with H = x^T A x, so after
// pinning one variable the covariance is (2A)^-1. Every observable used here
// is a gradient, hence independent of which variable is pinned.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "stcorr/exact_correlations.hpp"
#include "stcorr/spectral.hpp"

namespace stcorr {

enum class FieldKind {
    Free,      // t = 0 .. T-1, equilibrium weight on the first time slice
    Periodic,  // time wraps around: slice 0 couples to slice T-1
};

/// Hard cap on the number of variables of a dense form.
inline constexpr std::int64_t kMaxDenseVariables = 10'000;

struct QuadraticFormSpec {
    FieldKind kind = FieldKind::Periodic;
    std::int64_t T = 2;  // time extent (T1 for the free field)
    std::int64_t L = 2;

    /// Throws DomainError for odd/non-positive sizes and FiniteSizeError when
    /// T L / 2 exceeds kMaxDenseVariables.
    static QuadraticFormSpec make(FieldKind kind, std::int64_t T, std::int64_t L);

    [[nodiscard]] std::int64_t variables() const { return T * L / 2; }

    /// Variable index of site (t, i); t and i are reduced modulo T and L,
    /// and t + i must be even.
    [[nodiscard]] Eigen::Index index(std::int64_t t, std::int64_t i) const;
};

/// A site of the space-time lattice with a coefficient.
struct SiteWeight {
    std::int64_t t;
    std::int64_t i;
    double weight;
};
using LinearFunctional = std::vector<SiteWeight>;

/// Dense A with H = x^T A x, assembled from the rank-one terms of H.
Eigen::MatrixXd build_form(const QuadraticFormSpec& spec);

/// Dense A for the one-time equilibrium Hamiltonian (1/2) sum (h_{i+1}-h_i)^2
/// on a ring of L sites.
Eigen::MatrixXd build_equilibrium_form(std::int64_t L);

/// Number of eigenvalues of the symmetric matrix below tol * max|eigenvalue|.
int kernel_dimension(const Eigen::MatrixXd& A, double tol = 1e-10);

struct CovarianceMatrix {
    Eigen::MatrixXd values;  // full size; pinned row and column are zero
    Eigen::Index pinned = 0;
    double reciprocal_condition = 0.0;  // of the pinned 2A, in the 1-norm

    [[nodiscard]] double operator()(Eigen::Index a, Eigen::Index b) const { return values(a, b); }
    /// Cov(x_a - x_b, x_c - x_e)
    [[nodiscard]] double gradient_covariance(Eigen::Index a, Eigen::Index b, Eigen::Index c,
                                             Eigen::Index e) const;
};

/// Delete the pinned row/column of 2A and invert. Throws NumericError when
/// the pinned matrix is singular, which means the kernel of A is larger than
/// the constants.
CovarianceMatrix covariance(const Eigen::MatrixXd& A, Eigen::Index pinned);

/// Factorised space-time field for repeated covariance queries without
/// forming the inverse.
class SpaceTimeOracle {
public:
    explicit SpaceTimeOracle(const QuadraticFormSpec& spec, Eigen::Index pinned = 0);

    [[nodiscard]] const QuadraticFormSpec& spec() const { return spec_; }
    [[nodiscard]] double reciprocal_condition() const { return rcond_; }

    /// Sigma u (pinned component dropped) for a gradient functional u.
    [[nodiscard]] Eigen::VectorXd apply_covariance(const LinearFunctional& u) const;
    /// u^T Sigma v; u and v must be gradient functionals (weights sum to 0).
    [[nodiscard]] double covariance(const LinearFunctional& u, const LinearFunctional& v) const;
    [[nodiscard]] double dot(const LinearFunctional& u, const Eigen::VectorXd& w) const;

    /// Finite-torus analogue of the infinite-volume correlation (kind, t, j).
    /// Throws FiniteSizeError unless 2t + |j| + 4 <= min(T, L) / 2.
    [[nodiscard]] double pair_correlation(CorrelationKind kind, std::int64_t t, std::int64_t j) const;
    /// Same for several offsets, sharing one solve.
    [[nodiscard]] std::vector<double> pair_correlations(CorrelationKind kind, std::int64_t t,
                                                        std::span<const std::int64_t> js) const;

private:
    [[nodiscard]] Eigen::VectorXd to_dense(const LinearFunctional& u) const;

    QuadraticFormSpec spec_;
    Eigen::Index pinned_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double rcond_ = 0.0;
};

/// The two gradient functionals whose covariance defines (kind, t, j):
/// first the one that moves with j, then the reference at the origin.
std::pair<LinearFunctional, LinearFunctional> correlation_functionals(CorrelationKind kind,
                                                                      std::int64_t t,
                                                                      std::int64_t j);

/// Throws FiniteSizeError unless the observable fits the torus.
void check_fits(const QuadraticFormSpec& spec, std::int64_t t, std::int64_t j);

/// One-shot convenience wrapper around SpaceTimeOracle.
double spacetime_pair_correlation(const QuadraticFormSpec& spec, CorrelationKind kind,
                                  std::int64_t t, std::int64_t j);

/// E|h(nu,k)|^2 reconstructed from a dense covariance of the space-time
/// field by discrete Fourier transform (odd sites count as zero).
double dense_mode_variance(const QuadraticFormSpec& spec, const CovarianceMatrix& cov,
                           const ModeIndex& mode);

/// Largest entry-wise difference between the gradient covariances of the
/// first `window_variables` variables (both pinned at variable 0).
double covariance_gap(const CovarianceMatrix& a, const CovarianceMatrix& b,
                      Eigen::Index window_variables);

/// Gap between the periodic field of extent T restricted to 0 <= t < T1 and
/// the free field of extent T1, both on a ring of L sites.
double prop2_gap(std::int64_t T, std::int64_t T1, std::int64_t L);

}  // namespace stcorr
