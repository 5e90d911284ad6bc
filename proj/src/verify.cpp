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

#include "stcorr/verify.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "stcorr/errors.hpp"
#include "stcorr/estimators.hpp"
#include "stcorr/exact_correlations.hpp"
#include "stcorr/gaussian_oracle.hpp"
#include "stcorr/numeric.hpp"
#include "stcorr/simulator.hpp"
#include "stcorr/spectral.hpp"

namespace stcorr {

namespace {

using Clock = std::chrono::steady_clock;

// Largest deviation of periodic_displacement_variance from the ring value,
// times T, over T in {64, 128, 256} and the tested (L, j). Calibrated once on
// this implementation (observed 0.25) with a factor 2 margin.
constexpr double kPeriodicConvergenceConstant = 0.5;

struct Measured {
    double value;
    double tolerance;
    std::string relation = "<=";
    std::string note = {};
};

class SuiteRunner {
public:
    SuiteRunner(std::string suite, VerifyReport& report) : suite_(std::move(suite)), report_(report) {}

    // Runs `body` and records a check that passes when value <= tolerance
    // (or value < tolerance for relation "<").
    void check(const std::string& name, const std::string& anchor,
               const std::function<Measured()>& body, bool known_deviation = false) {
        CheckResult r;
        r.suite = suite_;
        r.name = name;
        r.anchor = anchor;
        const auto start = Clock::now();
        try {
            const Measured m = body();
            r.measured = m.value;
            r.tolerance = m.tolerance;
            r.relation = m.relation;
            r.note = m.note;
            const bool ok = std::isfinite(m.value) &&
                            (m.relation == "<" ? m.value < m.tolerance : m.value <= m.tolerance);
            r.status = known_deviation ? CheckStatus::KnownDeviation
                                       : (ok ? CheckStatus::Pass : CheckStatus::Fail);
        } catch (const std::exception& e) {
            r.status = CheckStatus::Fail;
            r.measured = std::nan("");
            r.note = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        report_.checks.push_back(std::move(r));
    }

private:
    std::string suite_;
    VerifyReport& report_;
};

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// ---------------------------------------------------------------------------

void exact_suite(VerifyReport& report) {
    SuiteRunner s("exact", report);

    s.check("g11 closed form vs trapezoid quadrature, 0<=t<=30, even |j|<=2t",
            "integral representation (1/pi) int cos(j phi) cos^2t(phi)", [] {
                double worst = 0.0;
                for (std::int64_t t = 0; t <= 30; ++t) {
                    for (std::int64_t j = -2 * t; j <= 2 * t; j += 2) {
                        worst = std::max(worst, std::abs(g11_exact(t, j) - g11_quadrature(t, j)));
                    }
                }
                return Measured{worst, 1e-9, "<"};
            });

    s.check("sum over even j of g11(t,j) equals 2, t<=20", "binomial theorem on the closed form", [] {
        double worst = 0.0;
        for (std::int64_t t = 0; t <= 20; ++t) {
            std::vector<double> terms;
            for (std::int64_t j = -2 * t; j <= 2 * t; j += 2) terms.push_back(g11_exact(t, j));
            worst = std::max(worst, std::abs(pairwise_sum(terms) - 2.0));
        }
        return Measured{worst, 1e-12};
    });

    s.check("sum over even j of g22(t,j) equals 0, 1<=t<=20", "telescoping of the g22 closed form", [] {
        double worst = 0.0;
        for (std::int64_t t = 1; t <= 20; ++t) {
            std::vector<double> terms;
            for (std::int64_t j = -2 * t; j <= 2 * t; j += 2) terms.push_back(g22_exact(t, j));
            worst = std::max(worst, std::abs(pairwise_sum(terms)));
        }
        return Measured{worst, 1e-12};
    });

    s.check("causality: g11 = 0 for |j| > 2t, g12 = 0 for |j| > 2t-1", "light cone of the dynamics", [] {
        double worst = 0.0;
        for (std::int64_t t = 1; t <= 40; ++t) {
            for (std::int64_t j = 2 * t + 2; j <= 2 * t + 10; j += 2) {
                worst = std::max({worst, std::abs(g11_exact(t, j)), std::abs(g11_exact(t, -j))});
            }
            for (std::int64_t j = 2 * t + 1; j <= 2 * t + 9; j += 2) {
                worst = std::max({worst, std::abs(g12_exact(t, j)), std::abs(g12_exact(t, -j))});
            }
        }
        return Measured{worst, 0.0};
    });

    s.check("symmetries: g11 even, g12 odd, g21 = -g12", "space symmetry and detailed balance", [] {
        double worst = 0.0;
        for (std::int64_t t = 1; t <= 40; ++t) {
            for (std::int64_t j = 0; j <= 2 * t + 2; j += 2) {
                worst = std::max(worst, std::abs(g11_exact(t, j) - g11_exact(t, -j)));
            }
            for (std::int64_t j = 1; j <= 2 * t + 1; j += 2) {
                worst = std::max(worst, std::abs(g12_exact(t, j) + g12_exact(t, -j)));
                worst = std::max(worst, std::abs(g21_exact(t, j) + g12_exact(t, j)));
            }
        }
        return Measured{worst, 0.0};
    });

    s.check("g12(t,1) = 2 g22(t,0), 1<=t<=50 (relative)",
            "g12 and g22 closed forms share g11(t-1,0) - g11(t-1,2)", [] {
                double worst = 0.0;
                for (std::int64_t t = 1; t <= 50; ++t) {
                    worst = std::max(worst, relative_gap(g12_exact(t, 1), 2.0 * g22_exact(t, 0)));
                }
                return Measured{worst, 1e-12};
            });

    s.check("ratio g12(t,1)/g22(t,0) = 8 as stated for the unnormalised g12 form",
            "literal ratio; the normalised closed forms give 2", [] {
                double worst = 0.0;
                for (std::int64_t t = 1; t <= 50; ++t) {
                    worst = std::max(worst, relative_gap(g12_exact(t, 1) / g22_exact(t, 0), 8.0));
                }
                return Measured{worst, 1e-12, "<=",
                                "the ratio is 2 because E|h|^2 = 1/(4 gamma) carries a factor 1/4"};
            },
            true);

    s.check("max_j |g11 - g11_asym| * t^1.5 at t in {50,100,200}", "Stirling correction is O(t^-3/2)", [] {
        double worst = 0.0;
        for (std::int64_t t : {50, 100, 200}) {
            double m = 0.0;
            for (std::int64_t j = -2 * t; j <= 2 * t; j += 2) {
                m = std::max(m, std::abs(g11_exact(t, j) -
                                         g11_asym(static_cast<double>(t), static_cast<double>(j))));
            }
            worst = std::max(worst, m * std::pow(static_cast<double>(t), 1.5));
        }
        return Measured{worst, 0.5};
    });

    s.check("|g22_asym + (g11_asym(t-1) - g11_asym(t))/4| * t^2.5, t>=50, |j|<=sqrt(t)",
            "time derivative of the g11 asymptotic", [] {
                double worst = 0.0;
                for (std::int64_t t : {50, 100, 200, 400}) {
                    const double tt = static_cast<double>(t);
                    for (std::int64_t j = 0; j * j <= t; ++j) {
                        const double jj = static_cast<double>(j);
                        const double d = g22_asym(tt, jj) + 0.25 * (g11_asym(tt - 1.0, jj) - g11_asym(tt, jj));
                        worst = std::max(worst, std::abs(d) * std::pow(tt, 2.5));
                    }
                }
                return Measured{worst, 2.0};
            });

    s.check("displacement asymptotic: bracket vs exp-sinh quadrature, t=100, j in 0..40",
            "sqrt(2t/pi) int_1^inf u^-2 exp(-x^2 u^2/2) du", [] {
                double worst = 0.0;
                boost::math::quadrature::exp_sinh<double> integrator;
                for (std::int64_t j = 0; j <= 40; j += 5) {
                    const double t = 100.0;
                    const double x = static_cast<double>(j) / std::sqrt(t);
                    // u = 1 + v maps [1, inf) to [0, inf)
                    const double q = integrator.integrate([x](double v) {
                        const double u = 1.0 + v;
                        return std::exp(-0.5 * x * x * u * u) / (u * u);
                    });
                    worst = std::max(worst, std::abs(displacement_correlation_asym(t, static_cast<double>(j)) -
                                                     std::sqrt(2.0 * t / pi) * q));
                }
                return Measured{worst, 1e-9};
            });

    s.check("displacement asymptotic obeys Cauchy-Schwarz: 0 <= C(t,j) <= C(t,0)",
            "covariance of equally distributed variables", [] {
                double worst = 0.0;
                for (double t : {1.0, 10.0, 100.0}) {
                    const double c0 = displacement_correlation_asym(t, 0.0);
                    for (double j = 0.0; j <= 10.0 * std::sqrt(t); j += 0.25 * std::sqrt(t)) {
                        const double c = displacement_correlation_asym(t, j);
                        worst = std::max({worst, c - c0, -c});
                    }
                }
                return Measured{worst, 0.0};
            });
}

// ---------------------------------------------------------------------------

void spectral_suite(VerifyReport& report, const VerifyOptions& options) {
    SuiteRunner s("spectral", report);

    s.check("Poisson kernel: quadrature vs a^n/(1-a^2), a in 0.1..0.9, n in 0..20",
            "cos(n w)/(1 - 2a cos w + a^2) generating function", [] {
                double worst = 0.0;
                for (int ai = 1; ai <= 9; ++ai) {
                    const double a = 0.1 * ai;
                    for (std::int64_t n = 0; n <= 20; ++n) {
                        worst = std::max(worst, std::abs(poisson_kernel_quadrature(a, n) - poisson_kernel(a, n)));
                    }
                }
                return Measured{worst, 1e-10};
            });

    s.check("gamma >= 0 and zero exactly on the zero-mode orbit (d=1,2)", "sum-of-squares form of gamma", [] {
        double violations = 0.0;
        for (auto [T, L, d] : {std::tuple{8, 8, 1}, std::tuple{12, 8, 1}, std::tuple{8, 6, 2}}) {
            const auto spec = TorusSpec::make(T, L, d);
            const std::int64_t modes = static_cast<std::int64_t>(std::pow(L, d));
            for (std::int64_t nu = 0; nu < T; ++nu) {
                for (std::int64_t m = 0; m < modes; ++m) {
                    std::vector<std::int64_t> k;
                    std::int64_t rest = m;
                    for (int a = 0; a < d; ++a) {
                        k.push_back(rest % L);
                        rest /= L;
                    }
                    const auto mode = ModeIndex::make(spec, nu, k);
                    const double g = gamma(spec, mode);
                    const bool zero = is_zero_mode(spec, mode);
                    if (g < 0.0 || (zero != (g == 0.0))) violations += 1.0;
                }
            }
        }
        return Measured{violations, 0.0};
    });

    s.check("gamma orbit symmetry (nu,k) ~ (T-nu,L-k) ~ (nu+T/2,k+L/2)", "conjugate orbit of a mode", [] {
        double worst = 0.0;
        const auto spec = TorusSpec::make(16, 12, 1);
        for (std::int64_t nu = 0; nu < 16; ++nu) {
            for (std::int64_t k = 0; k < 12; ++k) {
                const double g = gamma(spec, ModeIndex::make(spec, nu, {k}));
                worst = std::max(worst, std::abs(g - gamma(spec, ModeIndex::make(spec, -nu, {-k}))));
                worst = std::max(worst, std::abs(g - gamma(spec, ModeIndex::make(spec, nu + 8, {k + 6}))));
            }
        }
        return Measured{worst, 1e-14};
    });

    s.check("equal-time mode sums equal the bridge variance j(L-j)/L, L in {4,6,8,12,64}",
            "parity-split equal-time Fourier sums", [] {
                double worst = 0.0;
                for (std::int64_t L : {4, 6, 8, 12, 64}) {
                    for (std::int64_t j = 0; j < L; ++j) {
                        const double bridge = static_cast<double>(j * (L - j)) / static_cast<double>(L);
                        worst = std::max(worst, std::abs(equilibrium_gradient_variance(L, j) - bridge));
                    }
                }
                return Measured{worst, 1e-8};
            });

    s.check("T * |periodic displacement variance - ring variance|, T in {64,128,256}, L in {4,8}",
            "convergence of the time-periodic field as T grows", [] {
                double worst = 0.0;
                for (std::int64_t L : {4, 8}) {
                    for (std::int64_t T : {64, 128, 256}) {
                        const auto spec = TorusSpec::make(T, L, 1);
                        for (std::int64_t j = 1; j < L; ++j) {
                            const auto parity = j % 2 == 0 ? OffsetParity::Even : OffsetParity::Odd;
                            const double gap = std::abs(periodic_displacement_variance(spec, j, parity) -
                                                        equilibrium_gradient_variance(L, j));
                            worst = std::max(worst, gap * static_cast<double>(T));
                        }
                    }
                }
                return Measured{worst, kPeriodicConvergenceConstant};
            });

    s.check("equilibrium sampler: sum of gradients around the ring vanishes", "periodicity", [&] {
        double worst = 0.0;
        for (std::uint32_t r = 0; r < 4; ++r) {
            const auto h = sample_equilibrium(1024, 1, options.seed, r);
            double s = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i) s += h[(i + 1) % h.size()] - h[i];
            worst = std::max(worst, std::abs(s));
        }
        return Measured{worst, 1e-9};
    });

    s.check("equilibrium sampler: max z-score of E(h_j - h_0)^2 vs ring variance, L=4096, j in {1,2,5}",
            "equal-time Fourier sums, 4 standard errors", [&] {
                const std::int64_t L = 4096;
                const int samples = 200;
                double worst = 0.0;
                for (std::int64_t j : {1, 2, 5}) {
                    std::vector<double> per_sample;
                    for (int r = 0; r < samples; ++r) {
                        const auto h = sample_equilibrium(L, 1, options.seed, static_cast<std::uint32_t>(r));
                        CompensatedSum acc;
                        for (std::int64_t i = 0; i < L; ++i) {
                            const double g = h[static_cast<std::size_t>((i + j) % L)] - h[static_cast<std::size_t>(i)];
                            acc.add(g * g);
                        }
                        per_sample.push_back(acc.value() / static_cast<double>(L));
                    }
                    double m = 0.0;
                    for (double v : per_sample) m += v;
                    m /= samples;
                    double ss = 0.0;
                    for (double v : per_sample) ss += (v - m) * (v - m);
                    const double se = std::sqrt(ss / (samples * (samples - 1.0)));
                    worst = std::max(worst, std::abs(m - equilibrium_gradient_variance(L, j)) / se);
                }
                return Measured{worst, 4.0};
            });
}

// ---------------------------------------------------------------------------

void oracle_suite(VerifyReport& report) {
    SuiteRunner s("oracle", report);

    s.check("kernel of every assembled form is one-dimensional", "translation invariance only", [] {
        double bad = 0.0;
        for (auto [T, L] : {std::pair{2, 2}, std::pair{4, 4}, std::pair{8, 8}, std::pair{4, 12}}) {
            if (kernel_dimension(build_form(QuadraticFormSpec::make(FieldKind::Periodic, T, L))) != 1) bad += 1;
        }
        for (auto [T, L] : {std::pair{2, 4}, std::pair{4, 6}, std::pair{6, 8}}) {
            if (kernel_dimension(build_form(QuadraticFormSpec::make(FieldKind::Free, T, L))) != 1) bad += 1;
        }
        for (std::int64_t L : {4, 8, 12}) {
            if (kernel_dimension(build_equilibrium_form(L)) != 1) bad += 1;
        }
        return Measured{bad, 0.0};
    });

    s.check("gradient covariances independent of the pinned variable", "gauge invariance", [] {
        const auto spec = QuadraticFormSpec::make(FieldKind::Periodic, 8, 8);
        const auto A = build_form(spec);
        const auto c0 = covariance(A, 0);
        const auto c1 = covariance(A, 17);
        double worst = 0.0;
        const Eigen::Index n = spec.variables();
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                worst = std::max(worst, std::abs(c0.gradient_covariance(a, 3, b, 5) -
                                                 c1.gradient_covariance(a, 3, b, 5)));
            }
        }
        return Measured{worst, 1e-9, "<"};
    });

    s.check("dense mode variances equal 1/(4 gamma) on (4,4), (8,8), (8,12)",
            "independent Fourier modes of the space-time field", [] {
                double worst = 0.0;
                for (auto [T, L] : {std::pair{4, 4}, std::pair{8, 8}, std::pair{8, 12}}) {
                    const auto spec = QuadraticFormSpec::make(FieldKind::Periodic, T, L);
                    const auto cov = covariance(build_form(spec), 0);
                    const auto torus = TorusSpec::make(T, L, 1);
                    for (std::int64_t nu = 0; nu < T; ++nu) {
                        for (std::int64_t k = 0; k < L; ++k) {
                            const auto mode = ModeIndex::make(torus, nu, {k});
                            if (is_zero_mode(torus, mode)) continue;
                            worst = std::max(worst, std::abs(dense_mode_variance(spec, cov, mode) -
                                                             mode_variance(torus, mode)));
                        }
                    }
                }
                return Measured{worst, 1e-8};
            });

    s.check("dense equilibrium covariance equals the equal-time mode sums, L in {4,6,8,12}",
            "equal-time Fourier sums", [] {
                double worst = 0.0;
                for (std::int64_t L : {4, 6, 8, 12}) {
                    const auto cov = covariance(build_equilibrium_form(L), 0);
                    for (std::int64_t j = 1; j < L; ++j) {
                        const double dense = cov.gradient_covariance(j, 0, j, 0);
                        worst = std::max(worst, std::abs(dense - equilibrium_gradient_variance(L, j)));
                    }
                }
                return Measured{worst, 1e-8};
            });

    s.check("dense periodic field equals the finite (T,L) mode sum, (8,8) and (16,12)",
            "displacement mode sum of the periodic field", [] {
                double worst = 0.0;
                for (auto [T, L] : {std::pair{8, 8}, std::pair{16, 12}}) {
                    const auto spec = QuadraticFormSpec::make(FieldKind::Periodic, T, L);
                    const auto cov = covariance(build_form(spec), 0);
                    const auto torus = TorusSpec::make(T, L, 1);
                    for (std::int64_t j = 1; j < L; ++j) {
                        const bool even = j % 2 == 0;
                        const auto a = spec.index(even ? 0 : 1, j);
                        const auto b = spec.index(0, 0);
                        const double dense = cov.gradient_covariance(a, b, a, b);
                        const double sum = periodic_displacement_variance(
                            torus, j, even ? OffsetParity::Even : OffsetParity::Odd);
                        worst = std::max(worst, std::abs(dense - sum));
                    }
                }
                return Measured{worst, 1e-8};
            });

    s.check("prop2 gap strictly decreasing over T in {8,16,32,64} (violations)",
            "periodic field restricted to a window tends to the free field", [] {
                double prev = std::numeric_limits<double>::infinity();
                double violations = 0.0;
                std::ostringstream note;
                for (std::int64_t T : {8, 16, 32, 64}) {
                    const double g = prop2_gap(T, 4, 6);
                    note << "gap(" << T << ")=" << g << " ";
                    if (!(g < prev)) violations += 1.0;
                    prev = g;
                }
                return Measured{violations, 0.0, "<=", note.str()};
            });

    s.check("prop2 gap(256,4,6) / gap(8,4,6)", "calibrated decay", [] {
        return Measured{prop2_gap(256, 4, 6) / prop2_gap(8, 4, 6), 0.1, "<"};
    });

    s.check("free-field gap against itself", "self comparison", [] {
        const auto spec = QuadraticFormSpec::make(FieldKind::Free, 4, 6);
        const auto c = covariance(build_form(spec), 0);
        return Measured{covariance_gap(c, c, spec.variables()), 0.0};
    });

    s.check("periodic (64,64) field vs infinite-volume closed forms, t<=4 (max abs error)",
            "literal finite-size statement at T = L",
            [] {
                const auto spec = QuadraticFormSpec::make(FieldKind::Periodic, 64, 64);
                const SpaceTimeOracle oracle(spec);
                double worst = 0.0;
                for (auto kind : {CorrelationKind::SpaceSpace, CorrelationKind::TimeTime,
                                  CorrelationKind::SpaceTime, CorrelationKind::TimeSpace}) {
                    for (std::int64_t t = min_rounds(kind); t <= 4; ++t) {
                        std::vector<std::int64_t> js;
                        for (std::int64_t j = -(2 * t + 1); j <= 2 * t + 1; ++j) {
                            if (parity_ok(kind, j)) js.push_back(j);
                        }
                        const auto vals = oracle.pair_correlations(kind, t, js);
                        for (std::size_t n = 0; n < js.size(); ++n) {
                            worst = std::max(worst, std::abs(vals[n] - exact(kind, t, js[n])));
                        }
                    }
                }
                return Measured{worst, 0.02, "<",
                                "time-constant low-k modes have gamma ~ k^4; their weight is O(L/T)"};
            },
            true);
}

// ---------------------------------------------------------------------------

double zscore(double estimate, double expected, double se) {
    return std::abs(estimate - expected) / se;
}

std::vector<double> combine(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& weights) {
    std::vector<double> out(rows.front().size(), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t b = 0; b < out.size(); ++b) out[b] += weights[r] * rows[r][b];
    }
    return out;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

void mc_suite(VerifyReport& report, const VerifyOptions& options) {
    SuiteRunner s("mc", report);

    auto flat_moments = [&](int d, std::int64_t L, double expected_var) {
        auto state = InterfaceState::flat(L, d, 5.0);
        const CounterRng rng(options.seed, StreamTag::HalfSweep, 0);
        half_sweep(state, rng, options.workers);
        double sum = 0.0, sum2 = 0.0, n = 0.0;
        for (std::int64_t site = 0; site < state.sites(); ++site) {
            if (state.site_parity(site) != 1) continue;
            const double x = state.heights()[static_cast<std::size_t>(site)] - 5.0;
            sum += x;
            sum2 += x * x;
            n += 1.0;
        }
        const double mean = sum / n;
        const double var = sum2 / n;
        // sampling errors of the mean and of the second moment of a Gaussian
        const double z_mean = std::abs(mean) / std::sqrt(expected_var / n);
        const double z_var = std::abs(var - expected_var) / (expected_var * std::sqrt(2.0 / n));
        return std::max(z_mean, z_var);
    };

    s.check("half-sweep of flat h=5, d=1: mean 5 and variance 1/2 (max z-score)",
            "heat-bath conditional law, 2^21 sites", [&] { return Measured{flat_moments(1, 1 << 21, 0.5), 4.0}; });
    s.check("half-sweep of flat h=5, d=2: mean 5 and variance 1/4 (max z-score)",
            "heat-bath conditional law, 1024^2 sites", [&] { return Measured{flat_moments(2, 1024, 0.25), 4.0}; });

    s.check("half-sweep leaves the resting sub-lattice bit-identical", "parity conservation", [&] {
        auto state = InterfaceState::equilibrium(256, 2, options.seed);
        const std::vector<double> before(state.heights().begin(), state.heights().end());
        const CounterRng rng(options.seed, StreamTag::HalfSweep, 0);
        half_sweep(state, rng, options.workers);
        double changed = 0.0;
        for (std::int64_t n = 0; n < state.sites(); ++n) {
            if (state.site_parity(n) == 0 && state.heights()[static_cast<std::size_t>(n)] !=
                                                 before[static_cast<std::size_t>(n)]) {
                changed += 1.0;
            }
        }
        return Measured{changed, 0.0};
    });

    s.check("half-sweeps independent of worker count (differing sites, d=1 and d=2)",
            "counter-based noise keyed by (time, site)", [&] {
                double differing = 0.0;
                for (auto [L, d] : {std::pair<std::int64_t, int>{1 << 16, 1}, std::pair<std::int64_t, int>{256, 2}}) {
                    auto a = InterfaceState::equilibrium(L, d, options.seed);
                    auto b = a;
                    const CounterRng rng(options.seed, StreamTag::HalfSweep, 0);
                    for (int k = 0; k < 6; ++k) {
                        half_sweep(a, rng, 1);
                        half_sweep(b, rng, 5);
                    }
                    for (std::int64_t n = 0; n < a.sites(); ++n) {
                        if (a.heights()[static_cast<std::size_t>(n)] != b.heights()[static_cast<std::size_t>(n)]) {
                            differing += 1.0;
                        }
                    }
                }
                return Measured{differing, 0.0};
            });

    s.check("run() is a pure function of the config (differing snapshot values)", "determinism", [&] {
        SimConfig config;
        config.L = 512;
        config.seed = options.seed;
        config.measure_rounds = 10;
        config.replicas = 2;
        config.workers = options.workers;
        double differing = 0.0;
        for (auto dyn : {Dynamics::SublatticeParallel, Dynamics::RandomSequential}) {
            config.dynamics = dyn;
            std::vector<double> first;
            std::vector<double> second;
            run(config, [&](const Snapshot& snap) {
                first.insert(first.end(), snap.state.heights().begin(), snap.state.heights().end());
            });
            run(config, [&](const Snapshot& snap) {
                second.insert(second.end(), snap.state.heights().begin(), snap.state.heights().end());
            });
            if (first.size() != second.size()) differing += 1.0;
            for (std::size_t k = 0; k < std::min(first.size(), second.size()); ++k) {
                if (first[k] != second[k]) differing += 1.0;
            }
        }
        return Measured{differing, 0.0};
    });

    for (auto dyn : {Dynamics::SublatticeParallel, Dynamics::RandomSequential}) {
        const std::string label(to_string(dyn));
        s.check(label + ": gradient variance after 100 rounds, |E(h_1-h_0)^2 - 1| (L=2^15)",
                "invariance of the equilibrium measure", [&, dyn] {
                    auto state = InterfaceState::equilibrium(1 << 15, 1, options.seed);
                    const CounterRng rng(options.seed, StreamTag::HalfSweep, 0);
                    SequentialStream stream(options.seed, StreamTag::Sequential, 0);
                    advance(state, dyn, rng, stream, 100, options.workers);
                    const auto h = state.heights();
                    const auto L = static_cast<std::size_t>(state.sites());
                    CompensatedSum acc;
                    for (std::size_t i = 0; i < L; ++i) {
                        const double g = h[(i + 1) % L] - h[i];
                        acc.add(g * g);
                    }
                    return Measured{std::abs(acc.value() / static_cast<double>(L) - 1.0), 0.02};
                });
    }

    // One sub-lattice measurement shared by the estimator checks.
    SimConfig sim;
    sim.L = 1 << 15;
    sim.seed = options.seed;
    sim.workers = options.workers;
    sim.dynamics = Dynamics::SublatticeParallel;
    EstimatorConfig est;
    est.kinds = {CorrelationKind::SpaceSpace, CorrelationKind::TimeTime, CorrelationKind::SpaceTime,
                 CorrelationKind::TimeSpace};
    est.t_max = 8;
    est.j_max = 12;
    est.origins = 200;
    std::optional<CorrelationEstimator> sub;
    std::string sub_error;
    try {
        sub.emplace(measure(sim, est));
    } catch (const std::exception& e) {
        sub_error = e.what();
    }
    auto need = [&]() -> const CorrelationEstimator& {
        if (!sub) throw NumericError("sub-lattice measurement failed: " + sub_error);
        return *sub;
    };

    s.check("sub-lattice g11(0,0) = 2 (z-score)", "equilibrium E(h_{i+2}-h_i)^2 = 2", [&] {
        const auto& a = need().accumulator(CorrelationKind::SpaceSpace);
        return Measured{zscore(a.mean(0, 0), 2.0, a.standard_error(0, 0)), 3.0};
    });
    s.check("sub-lattice g11(0,2) = 0 (z-score)", "disjoint increments at equal time", [&] {
        const auto& a = need().accumulator(CorrelationKind::SpaceSpace);
        return Measured{zscore(a.mean(0, 2), 0.0, a.standard_error(0, 2)), 3.0};
    });
    s.check("sub-lattice g11(t,0), g22(t,0), g12(t,1) vs closed forms, t<=8 (max z-score)",
            "closed forms of the sub-lattice dynamics", [&] {
                double worst = 0.0;
                const auto& e = need();
                for (std::int64_t t = 0; t <= 8; ++t) {
                    const auto& a = e.accumulator(CorrelationKind::SpaceSpace);
                    worst = std::max(worst, zscore(a.mean(t, 0), g11_exact(t, 0), a.standard_error(t, 0)));
                    if (t == 0) continue;
                    const auto& b = e.accumulator(CorrelationKind::TimeTime);
                    worst = std::max(worst, zscore(b.mean(t, 0), g22_exact(t, 0), b.standard_error(t, 0)));
                    const auto& c = e.accumulator(CorrelationKind::SpaceTime);
                    worst = std::max(worst, zscore(c.mean(t, 1), g12_exact(t, 1), c.standard_error(t, 1)));
                }
                return Measured{worst, 3.0};
            });
    s.check("estimated g11(t,j) vs g11(t,-j), t<=8 (max joint z-score)", "even symmetry in j", [&] {
        const auto& a = need().accumulator(CorrelationKind::SpaceSpace);
        double worst = 0.0;
        for (std::int64_t t = 0; t <= 8; ++t) {
            for (std::int64_t j = 2; j <= std::min<std::int64_t>(2 * t + 2, a.j_max()); j += 2) {
                const auto diff = combine({a.block_means(t, j), a.block_means(t, -j)}, {1.0, -1.0});
                worst = std::max(worst, std::abs(mean_of(diff)) / batch_standard_error(diff));
            }
        }
        return Measured{worst, 4.0};
    });
    s.check("estimated g21(t,j) + g12(t,j), t in 1..8, odd |j|<=2t+1 (max joint z-score)",
            "detailed balance", [&] {
                const auto& a = need().accumulator(CorrelationKind::SpaceTime);
                const auto& b = need().accumulator(CorrelationKind::TimeSpace);
                double worst = 0.0;
                for (std::int64_t t = 1; t <= 8; ++t) {
                    for (std::int64_t j = -(2 * t + 1); j <= 2 * t + 1; j += 2) {
                        if (std::abs(j) > a.j_max()) continue;
                        const auto sum = combine({a.block_means(t, j), b.block_means(t, j)}, {1.0, 1.0});
                        worst = std::max(worst, std::abs(mean_of(sum)) / batch_standard_error(sum));
                    }
                }
                return Measured{worst, 4.0};
            });
    s.check("sum over even |j|<=12 of estimated g11(t,j) = 2, t<=5 (max z-score)", "sum rule", [&] {
        const auto& a = need().accumulator(CorrelationKind::SpaceSpace);
        double worst = 0.0;
        for (std::int64_t t = 0; t <= 5; ++t) {
            std::vector<std::vector<double>> rows;
            for (std::int64_t j = -12; j <= 12; j += 2) rows.push_back(a.block_means(t, j));
            const auto total = combine(rows, std::vector<double>(rows.size(), 1.0));
            worst = std::max(worst, std::abs(mean_of(total) - 2.0) / batch_standard_error(total));
        }
        return Measured{worst, 4.0};
    });
    s.check("estimated cells with |j| > 2t vanish (max z-score, parity-matched cells)", "causality", [&] {
        double worst = 0.0;
        for (const auto& acc : need().accumulators()) {
            for (std::int64_t t = min_rounds(acc.kind()); t <= 8; ++t) {
                for (std::int64_t j = -acc.j_max(); j <= acc.j_max(); ++j) {
                    if (std::abs(j) <= 2 * t || !parity_ok(acc.kind(), j)) continue;
                    worst = std::max(worst, zscore(acc.mean(t, j), 0.0, acc.standard_error(t, j)));
                }
            }
        }
        return Measured{worst, 4.0};
    });

    s.check("sequential dynamics g11(0,0) = 2 (z-score, L=2^14, 100 origins)",
            "equilibrium E(h_{i+2}-h_i)^2 = 2", [&] {
                SimConfig seq = sim;
                seq.L = 1 << 14;
                seq.dynamics = Dynamics::RandomSequential;
                EstimatorConfig e;
                e.kinds = {CorrelationKind::SpaceSpace};
                e.t_max = 0;
                e.j_max = 0;
                e.origins = 100;
                const auto r = measure(seq, e);
                const auto& a = r.accumulator(CorrelationKind::SpaceSpace);
                return Measured{zscore(a.mean(0, 0), 2.0, a.standard_error(0, 0)), 3.0};
            });

    s.check("d=2 sub-lattice displacement variance grows with t (violations over t=1,2,4,...,64)",
            "logarithmic growth in two dimensions", [&] {
                SimConfig d2 = sim;
                d2.L = 64;
                d2.d = 2;
                EstimatorConfig e;
                e.kinds = {};
                e.origins = 16;
                e.blocks = 8;
                e.displacement_lags = {1, 2, 4, 8, 16, 32, 64};
                const auto r = measure(d2, e);
                double violations = 0.0;
                double prev = 0.0;
                for (auto t : e.displacement_lags) {
                    const double v = r.displacement()->mean(t);
                    if (!(v > prev)) violations += 1.0;
                    prev = v;
                }
                return Measured{violations, 0.0};
            });
}

}  // namespace

std::optional<VerifySuite> parse_suite(std::string_view name) {
    if (name == "exact") return VerifySuite::Exact;
    if (name == "spectral") return VerifySuite::Spectral;
    if (name == "oracle") return VerifySuite::Oracle;
    if (name == "mc") return VerifySuite::MonteCarlo;
    if (name == "all") return VerifySuite::All;
    return std::nullopt;
}

std::string_view to_string(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::Exact: return "exact";
        case VerifySuite::Spectral: return "spectral";
        case VerifySuite::Oracle: return "oracle";
        case VerifySuite::MonteCarlo: return "mc";
        case VerifySuite::All: return "all";
    }
    return "unknown";
}

bool VerifyReport::passed() const { return failures() == 0; }

int VerifyReport::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                          [](const CheckResult& c) { return c.status == CheckStatus::Fail; }));
}

VerifyReport run_verify(VerifySuite suite, const VerifyOptions& options) {
    VerifyReport report;
    const bool all = suite == VerifySuite::All;
    if (all || suite == VerifySuite::Exact) exact_suite(report);
    if (all || suite == VerifySuite::Spectral) spectral_suite(report, options);
    if (all || suite == VerifySuite::Oracle) oracle_suite(report);
    if (all || suite == VerifySuite::MonteCarlo) mc_suite(report, options);
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
    int pass = 0, deviations = 0;
    for (const auto& c : report.checks) {
        const char* tag = c.status == CheckStatus::Pass ? "PASS"
                          : c.status == CheckStatus::Fail ? "FAIL"
                                                          : "DEVIATION";
        if (c.status == CheckStatus::Pass) ++pass;
        if (c.status == CheckStatus::KnownDeviation) ++deviations;
        out << std::left << std::setw(9) << tag << " [" << c.suite << "] " << c.name << "\n"
            << "          measured=" << std::setprecision(6) << c.measured << " required " << c.relation
            << ' ' << c.tolerance << "  against: " << c.anchor << "  (" << std::fixed
            << std::setprecision(2) << c.seconds << " s)" << std::defaultfloat << "\n";
        if (!c.note.empty()) out << "          note: " << c.note << "\n";
    }
    out << "summary: " << pass << " passed, " << report.failures() << " failed, " << deviations
        << " known deviations\n";
}

}  // namespace stcorr
