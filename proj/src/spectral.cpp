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

#include "stcorr/spectral.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/trapezoidal.hpp>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "stcorr/errors.hpp"
#include "stcorr/numeric.hpp"
#include "stcorr/rng.hpp"

namespace stcorr {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

void require_even_length(std::int64_t L, const char* what) {
    if (L < 2 || L % 2 != 0) {
        throw DomainError(std::string(what) + ": L=" + std::to_string(L) +
                          " must be even and positive");
    }
}

}  // namespace

TorusSpec TorusSpec::make(std::int64_t T, std::int64_t L, int d) {
    if (T < 2 || T % 2 != 0) {
        throw DomainError("TorusSpec: T=" + std::to_string(T) + " must be even and positive");
    }
    require_even_length(L, "TorusSpec");
    if (d < 1) throw DomainError("TorusSpec: dimension must be >= 1");
    return TorusSpec{T, L, d};
}

ModeIndex ModeIndex::make(const TorusSpec& spec, std::int64_t nu, std::vector<std::int64_t> k) {
    if (static_cast<int>(k.size()) != spec.d) {
        throw DomainError("ModeIndex: expected " + std::to_string(spec.d) + " spatial components");
    }
    for (auto& kn : k) kn = mod(kn, spec.L);
    return ModeIndex{mod(nu, spec.T), std::move(k)};
}

double cos_2pi_frac(std::int64_t n, std::int64_t N) {
    std::int64_t r = mod(n, N);
    if ((4 * r) % N == 0) {
        switch ((4 * r) / N) {
            case 0: return 1.0;
            case 1: return 0.0;
            case 2: return -1.0;
            default: return 0.0;
        }
    }
    if (2 * r > N) r = N - r;
    return std::cos(2.0 * pi * static_cast<double>(r) / static_cast<double>(N));
}

double sin_2pi_frac(std::int64_t n, std::int64_t N) {
    const std::int64_t r = mod(n, N);
    if ((4 * r) % N == 0) {
        switch ((4 * r) / N) {
            case 0: return 0.0;
            case 1: return 1.0;
            case 2: return 0.0;
            default: return -1.0;
        }
    }
    if (2 * r > N) return -std::sin(2.0 * pi * static_cast<double>(N - r) / static_cast<double>(N));
    return std::sin(2.0 * pi * static_cast<double>(r) / static_cast<double>(N));
}

double neighbor_cosine(std::int64_t L, const std::vector<std::int64_t>& k) {
    double c = 0.0;
    for (auto kn : k) c += cos_2pi_frac(kn, L);
    return c / static_cast<double>(k.size());
}

double gamma(const TorusSpec& spec, const ModeIndex& mode) {
    const double c = neighbor_cosine(spec.L, mode.k);
    const double cw = cos_2pi_frac(mode.nu, spec.T);
    const double sw = sin_2pi_frac(mode.nu, spec.T);
    // (c - cos w)^2 + sin^2 w: same value, no cancellation near the zero mode
    return (c - cw) * (c - cw) + sw * sw;
}

bool is_zero_mode(const TorusSpec& spec, const ModeIndex& mode) {
    bool all_zero = mode.nu == 0;
    bool all_half = mode.nu == spec.T / 2;
    for (auto kn : mode.k) {
        all_zero = all_zero && kn == 0;
        all_half = all_half && kn == spec.L / 2;
    }
    return all_zero || all_half;
}

double mode_variance(const TorusSpec& spec, const ModeIndex& mode) {
    if (is_zero_mode(spec, mode)) {
        throw ZeroModeError("mode_variance: mode in the zero-mode orbit is distributed "
                            "according to the Lebesgue measure");
    }
    return 1.0 / (4.0 * gamma(spec, mode));
}

double equilibrium_gradient_variance(std::int64_t L, std::int64_t j) {
    require_even_length(L, "equilibrium_gradient_variance");
    if (j < 0 || j >= L) {
        throw DomainError("equilibrium_gradient_variance: need 0 <= j < L");
    }
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(L));
    const bool even = j % 2 == 0;
    for (std::int64_t k = 1; k < L; ++k) {
        if (k == L / 2) continue;
        const double s = sin_2pi_frac(k, L);
        const double ckj = cos_2pi_frac(k * j, L);
        if (even) {
            terms.push_back((1.0 - ckj) / (s * s));
        } else {
            terms.push_back((1.0 - ckj * cos_2pi_frac(k, L)) / (s * s));
        }
    }
    const double inv_l = 1.0 / static_cast<double>(L);
    return (even ? 0.0 : inv_l) + inv_l * pairwise_sum(terms);
}

double periodic_displacement_variance(const TorusSpec& spec, std::int64_t j, OffsetParity parity) {
    if (spec.d != 1) throw DomainError("periodic_displacement_variance: requires d = 1");
    const bool even = j % 2 == 0;
    if (even != (parity == OffsetParity::Even)) {
        throw ParityError("periodic_displacement_variance: j=" + std::to_string(j) +
                          " does not match requested parity");
    }
    const std::int64_t T = spec.T;
    const std::int64_t L = spec.L;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(T * L));
    ModeIndex mode{0, {0}};
    for (std::int64_t k = 0; k < L; ++k) {
        if (even && (k == 0 || k == L / 2)) continue;
        for (std::int64_t nu = 0; nu < T; ++nu) {
            mode.nu = nu;
            mode.k[0] = k;
            if (is_zero_mode(spec, mode)) continue;
            const double g = gamma(spec, mode);
            // cos(2 pi (k j / L + nu / T)) with an exact integer phase numerator
            const double num = even ? 1.0 - cos_2pi_frac(k * j, L)
                                    : 1.0 - cos_2pi_frac(k * j * T + nu * L, L * T);
            terms.push_back(num / g);
        }
    }
    return pairwise_sum(terms) / static_cast<double>(L * T);
}

double poisson_kernel(double a, std::int64_t n) {
    if (!(std::abs(a) < 1.0)) throw DomainError("poisson_kernel: requires |a| < 1");
    if (n < 0) throw DomainError("poisson_kernel: requires n >= 0");
    return std::pow(a, static_cast<double>(n)) / (1.0 - a * a);
}

double poisson_kernel_quadrature(double a, std::int64_t n) {
    if (!(std::abs(a) < 1.0)) throw DomainError("poisson_kernel_quadrature: requires |a| < 1");
    const double nn = static_cast<double>(n);
    auto f = [a, nn](double w) { return std::cos(nn * w) / (1.0 - 2.0 * a * std::cos(w) + a * a); };
    double error = 0.0;
    const double v = boost::math::quadrature::trapezoidal(f, 0.0, 2.0 * pi, 1e-15, 20, &error);
    if (error > 1e-11) {
        throw NumericError("poisson_kernel_quadrature: estimated error " + std::to_string(error));
    }
    return v / (2.0 * pi);
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

std::vector<double> sample_equilibrium(std::int64_t L, int d, std::uint64_t seed,
                                       std::uint32_t replica) {
    require_even_length(L, "sample_equilibrium");
    if (d < 1) throw DomainError("sample_equilibrium: dimension must be >= 1");
    std::int64_t n = 1;
    for (int a = 0; a < d; ++a) n *= L;

    std::unique_ptr<fftw_complex, FftwFree> spectrum(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n))));
    auto* x = spectrum.get();

    const CounterRng rng(seed, StreamTag::Equilibrium, replica);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (std::int64_t m = 0; m < n; ++m) {
        // decode m (axis 0 fastest) and its conjugate partner -k
        std::int64_t rest = m;
        std::int64_t partner = 0;
        std::int64_t stride = 1;
        for (int a = 0; a < d; ++a) {
            k[static_cast<std::size_t>(a)] = rest % L;
            rest /= L;
            partner += mod(-k[static_cast<std::size_t>(a)], L) * stride;
            stride *= L;
        }
        if (partner < m) continue;  // filled together with its partner
        if (m == 0) {
            x[0][0] = 0.0;
            x[0][1] = 0.0;
            continue;
        }
        const double c = neighbor_cosine(L, k);
        const double var = 1.0 / (2.0 * d * (1.0 - c));
        const auto [z1, z2] = rng.normal_pair(static_cast<std::uint64_t>(m), 0);
        if (partner == m) {
            x[m][0] = std::sqrt(var) * z1;
            x[m][1] = 0.0;
        } else {
            const double s = std::sqrt(0.5 * var);
            x[m][0] = s * z1;
            x[m][1] = s * z2;
            x[partner][0] = s * z1;
            x[partner][1] = -s * z2;
        }
    }

    std::vector<int> dims(static_cast<std::size_t>(d), static_cast<int>(L));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft(d, dims.data(), x, x, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> heights(static_cast<std::size_t>(n));
    for (std::int64_t m = 0; m < n; ++m) heights[static_cast<std::size_t>(m)] = scale * x[m][0];
    return heights;
}

}  // namespace stcorr
