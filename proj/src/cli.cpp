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

#include "stcorr/cli.hpp"

#include <boost/math/tools/minima.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "stcorr/errors.hpp"
#include "stcorr/exact_correlations.hpp"
#include "stcorr/numeric.hpp"

namespace stcorr {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericError(std::string(what) + " is not finite");
}

void check_common(std::int64_t L, std::int64_t t1, int replicas, int workers, int blocks) {
    if (L < 4 || L % 2 != 0) throw DomainError("L must be even and >= 4");
    if (t1 < kMinBlocks) throw DomainError("t1 must be >= " + std::to_string(kMinBlocks));
    if (replicas < 1 || workers < 1) throw DomainError("replicas and workers must be >= 1");
    if (blocks < kMinBlocks || blocks > L) {
        throw DomainError("blocks must lie in [" + std::to_string(kMinBlocks) + ", L]");
    }
}

SimConfig sim_for(std::int64_t L, Dynamics dynamics, std::uint64_t seed, int replicas, int workers) {
    SimConfig sim;
    sim.L = L;
    sim.d = 1;
    sim.dynamics = dynamics;
    sim.seed = seed;
    sim.replicas = replicas;
    sim.workers = workers;
    return sim;
}

void write_run_header(std::ostream& out, const char* command, std::int64_t L, std::int64_t t1,
                      std::uint64_t seed, int replicas, int blocks, Dynamics dynamics) {
    out << "# stcorr " << kVersion << ' ' << command << "\n"
        << "# dynamics=" << to_string(dynamics) << " L=" << L << " t1=" << t1 << " seed=" << seed
        << " replicas=" << replicas << " blocks=" << blocks << "\n"
        << "# one time unit = L micro-updates (sequential) or two half-sweeps (sublattice)\n"
        << "# err columns: batch-means standard error of the raw estimate over " << blocks
        << " contiguous segments of the ring\n";
}

}  // namespace

std::string format_number(double x) {
    if (x == 0.0) return "0";  // also folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------

void write_exact_table(std::ostream& out, std::int64_t t_max, std::int64_t j_max) {
    if (t_max < 0 || j_max < 0) throw DomainError("exact-table: t_max and j_max must be >= 0");
    out << "# stcorr " << kVersion << " exact-table t_max=" << t_max << " j_max=" << j_max << "\n"
        << "# exact: closed forms of the sub-lattice dynamics; asymptotic: leading large-t term "
           "(empty at t=0)\n"
        << "kind,t,j,exact,asymptotic\n";
    for (auto kind : {CorrelationKind::SpaceSpace, CorrelationKind::TimeTime, CorrelationKind::SpaceTime,
                      CorrelationKind::TimeSpace}) {
        for (std::int64_t t = min_rounds(kind); t <= t_max; ++t) {
            for (std::int64_t j = -j_max; j <= j_max; ++j) {
                if (!parity_ok(kind, j)) continue;
                out << short_name(kind) << ',' << t << ',' << j << ',' << format_number(exact(kind, t, j))
                    << ',';
                if (t >= 1) {
                    out << format_number(asymptotic(kind, static_cast<double>(t), static_cast<double>(j)));
                }
                out << '\n';
            }
        }
    }
}

// ---------------------------------------------------------------------------

double g11_scale(double t) { return std::sqrt(pi * t) / 2.0; }
double g22_scale(double t) { return -4.0 * t * std::sqrt(pi * t); }
double g12_scale(double t, double j) { return -2.0 * t * std::sqrt(pi * t) / j; }

void Fig2Config::validate() const {
    check_common(L, t1, replicas, workers, blocks);
    if (t_max < 1) throw DomainError("fig2: t_max must be >= 1");
}

Fig2Result compute_fig2(const Fig2Config& config) {
    config.validate();
    EstimatorConfig est;
    est.kinds = {CorrelationKind::SpaceSpace, CorrelationKind::TimeTime, CorrelationKind::SpaceTime};
    est.t_max = config.t_max;
    est.j_max = 1;
    est.origins = config.t1;
    est.blocks = config.blocks;
    const auto r = measure(sim_for(config.L, config.dynamics, config.seed, config.replicas, config.workers), est);
    const auto& a11 = r.accumulator(CorrelationKind::SpaceSpace);
    const auto& a22 = r.accumulator(CorrelationKind::TimeTime);
    const auto& a12 = r.accumulator(CorrelationKind::SpaceTime);

    Fig2Result out{config, {}};
    for (std::int64_t t = 1; t <= config.t_max; ++t) {
        const double tt = static_cast<double>(t);
        Fig2Row row{};
        row.t = t;
        row.g11_raw = a11.mean(t, 0);
        row.g11_scaled = g11_scale(tt) * row.g11_raw;
        row.g11_err = a11.standard_error(t, 0);
        row.g22_raw = a22.mean(t, 0);
        row.g22_scaled = g22_scale(tt) * row.g22_raw;
        row.g22_err = a22.standard_error(t, 0);
        row.g12_raw = a12.mean(t, 1);
        row.g12_scaled = g12_scale(tt, 1.0) * row.g12_raw;
        row.g12_err = a12.standard_error(t, 1);
        row.g11_oe_exact_scaled = g11_scale(tt) * g11_exact(t, 0);
        row.g22_oe_exact_scaled = g22_scale(tt) * g22_exact(t, 0);
        for (double v : {row.g11_raw, row.g11_scaled, row.g11_err, row.g22_raw, row.g22_scaled, row.g22_err,
                         row.g12_raw, row.g12_scaled, row.g12_err}) {
            require_finite(v, "fig2 cell");
        }
        out.rows.push_back(row);
    }
    return out;
}

void write_fig2(std::ostream& out, const Fig2Result& result) {
    const auto& c = result.config;
    write_run_header(out, "fig2", c.L, c.t1, c.seed, c.replicas, c.blocks, c.dynamics);
    out << "# scaled: g11*sqrt(pi t)/2, g22*(-4 t sqrt(pi t)), g12(t,1)*(-2 t sqrt(pi t)/j) with j=1\n"
        << "# oe columns: sub-lattice closed forms under the same scaling; the g12 reference equals "
           "the g22 one and is omitted\n"
        << "t,g11_raw,g11_scaled,g11_err,g22_raw,g22_scaled,g22_err,g12_raw,g12_scaled,g12_err,"
           "g11_oe_exact_scaled,g22_oe_exact_scaled\n";
    for (const auto& r : result.rows) {
        out << r.t;
        for (double v : {r.g11_raw, r.g11_scaled, r.g11_err, r.g22_raw, r.g22_scaled, r.g22_err, r.g12_raw,
                         r.g12_scaled, r.g12_err, r.g11_oe_exact_scaled, r.g22_oe_exact_scaled}) {
            out << ',' << format_number(v);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------

double shape_value(FitShape shape, double t, double j, double diffusion) {
    const double e = std::exp(-j * j / (4.0 * diffusion * t));
    switch (shape) {
        case FitShape::Gaussian: return e;
        case FitShape::SecondHermite: return (1.0 - j * j / (2.0 * diffusion * t)) * e;
        case FitShape::FirstHermite: return j * e;
    }
    return 0.0;
}

ShapeFit fit_shape(FitShape shape, double t, const std::vector<double>& js, const std::vector<double>& values,
                   const std::vector<double>& errors) {
    if (js.size() != values.size() || js.size() != errors.size() || js.size() < 3) {
        throw DomainError("fit_shape: need >= 3 points with matching errors");
    }
    // chi^2 with the amplitude eliminated in closed form
    auto profile = [&](double log_d, double* amplitude) {
        const double d = std::exp(log_d);
        double sfy = 0.0, sff = 0.0;
        for (std::size_t n = 0; n < js.size(); ++n) {
            const double w = 1.0 / (errors[n] * errors[n]);
            const double f = shape_value(shape, t, js[n], d);
            sfy += w * f * values[n];
            sff += w * f * f;
        }
        const double a = sff > 0.0 ? sfy / sff : 0.0;
        double chi2 = 0.0;
        for (std::size_t n = 0; n < js.size(); ++n) {
            const double r = (values[n] - a * shape_value(shape, t, js[n], d)) / errors[n];
            chi2 += r * r;
        }
        if (amplitude != nullptr) *amplitude = a;
        return chi2;
    };
    for (double e : errors) {
        if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("fit_shape: errors must be positive");
    }

    const double lo = std::log(0.01);
    const double hi = std::log(100.0);
    constexpr int kGrid = 200;
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k <= kGrid; ++k) {
        const double c = profile(lo + (hi - lo) * k / kGrid, nullptr);
        if (c < best) {
            best = c;
            best_k = k;
        }
    }
    const double step = (hi - lo) / kGrid;
    const double a = lo + step * std::max(0, best_k - 1);
    const double b = lo + step * std::min(kGrid, best_k + 1);
    const auto [x, fx] = boost::math::tools::brent_find_minima(
        [&](double v) { return profile(v, nullptr); }, a, b, std::numeric_limits<double>::digits / 2);
    ShapeFit fit;
    fit.chi2 = profile(x, &fit.amplitude);
    fit.diffusion = std::exp(x);
    (void)fx;
    return fit;
}

void Fig3Config::validate() const {
    check_common(L, t1, replicas, workers, blocks);
    if (t < 1) throw DomainError("fig3: t must be >= 1");
    if (j_max < 2 || 2 * j_max + 1 > L) throw DomainError("fig3: need 2 <= j_max and 2 j_max + 1 <= L");
}

Fig3Result compute_fig3(const Fig3Config& config) {
    config.validate();
    EstimatorConfig est;
    est.kinds = {CorrelationKind::SpaceSpace, CorrelationKind::TimeTime, CorrelationKind::SpaceTime};
    est.lags = {config.t};
    est.t_max = config.t;
    est.j_max = config.j_max;
    est.origins = config.t1;
    est.blocks = config.blocks;
    const auto r = measure(sim_for(config.L, config.dynamics, config.seed, config.replicas, config.workers), est);
    const auto& a11 = r.accumulator(CorrelationKind::SpaceSpace);
    const auto& a22 = r.accumulator(CorrelationKind::TimeTime);
    const auto& a12 = r.accumulator(CorrelationKind::SpaceTime);

    Fig3Result out{config, {}, {}, {}, {}};
    std::vector<double> js, v11, e11, v22, e22, v12, e12;
    for (std::int64_t j = -config.j_max; j <= config.j_max; ++j) {
        Fig3Row row{};
        row.j = j;
        row.g11 = a11.mean(config.t, j);
        row.g11_err = a11.standard_error(config.t, j);
        row.g22 = a22.mean(config.t, j);
        row.g22_err = a22.standard_error(config.t, j);
        row.g12 = a12.mean(config.t, j);
        row.g12_err = a12.standard_error(config.t, j);
        out.rows.push_back(row);
        js.push_back(static_cast<double>(j));
        v11.push_back(row.g11);
        e11.push_back(row.g11_err);
        v22.push_back(row.g22);
        e22.push_back(row.g22_err);
        v12.push_back(row.g12);
        e12.push_back(row.g12_err);
    }
    const double t = static_cast<double>(config.t);
    out.fit11 = fit_shape(FitShape::Gaussian, t, js, v11, e11);
    out.fit22 = fit_shape(FitShape::SecondHermite, t, js, v22, e22);
    out.fit12 = fit_shape(FitShape::FirstHermite, t, js, v12, e12);
    for (auto& row : out.rows) {
        const double j = static_cast<double>(row.j);
        row.g11_fit = out.fit11.amplitude * shape_value(FitShape::Gaussian, t, j, out.fit11.diffusion);
        row.g22_fit = out.fit22.amplitude * shape_value(FitShape::SecondHermite, t, j, out.fit22.diffusion);
        row.g12_fit = out.fit12.amplitude * shape_value(FitShape::FirstHermite, t, j, out.fit12.diffusion);
    }
    return out;
}

void write_fig3(std::ostream& out, const Fig3Result& result) {
    const auto& c = result.config;
    write_run_header(out, "fig3", c.L, c.t1, c.seed, c.replicas, c.blocks, c.dynamics);
    out << "# t=" << c.t << " j_max=" << c.j_max << "\n"
        << "# fits (weighted least squares): g11 ~ A exp(-j^2/4Dt); g22 ~ A (1 - j^2/2Dt) exp(-j^2/4Dt); "
           "g12 ~ A j exp(-j^2/4Dt)\n";
    auto echo = [&](const char* name, const ShapeFit& f) {
        out << "# fit " << name << ": A=" << format_number(f.amplitude) << " D=" << format_number(f.diffusion)
            << " chi2=" << format_number(f.chi2) << "\n";
    };
    echo("g11", result.fit11);
    echo("g22", result.fit22);
    echo("g12", result.fit12);
    out << "j,g11,g11_err,g22,g22_err,g12,g12_err,g11_fit,g22_fit,g12_fit\n";
    for (const auto& r : result.rows) {
        out << r.j;
        for (double v : {r.g11, r.g11_err, r.g22, r.g22_err, r.g12, r.g12_err, r.g11_fit, r.g22_fit, r.g12_fit}) {
            out << ',' << format_number(v);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------

void write_simulation(std::ostream& out, const SimConfig& config) {
    config.validate();
    out << "# stcorr " << kVersion << " simulate\n"
        << "# dynamics=" << to_string(config.dynamics) << " L=" << config.L << " d=" << config.d
        << " seed=" << config.seed << " warmup=" << config.warmup_rounds << " rounds=" << config.measure_rounds
        << " stride=" << config.snapshot_stride << " replicas=" << config.replicas
        << " initial=" << (config.initial == InitialCondition::Equilibrium ? "equilibrium" : "flat") << "\n"
        << "# displacement_variance: mean over sites of (h(t) - h(0))^2 within the replica\n"
        << "replica,snapshot,time,mean_height,gradient_variance,displacement_variance\n";
    std::vector<double> origin;
    run(config, [&](const Snapshot& snap) {
        const auto h = snap.state.heights();
        if (snap.index == 0) origin.assign(h.begin(), h.end());
        const std::int64_t L = snap.state.length();
        CompensatedSum mean, grad, disp;
        for (std::size_t n = 0; n < h.size(); ++n) {
            const auto i = static_cast<std::int64_t>(n);
            const std::size_t next = static_cast<std::size_t>(i % L == L - 1 ? i - (L - 1) : i + 1);
            const double g = h[next] - h[n];
            const double dh = h[n] - origin[n];
            mean.add(h[n]);
            grad.add(g * g);
            disp.add(dh * dh);
        }
        const double n = static_cast<double>(h.size());
        out << snap.replica << ',' << snap.index << ',' << snap.time << ',' << format_number(mean.value() / n)
            << ',' << format_number(grad.value() / n) << ',' << format_number(disp.value() / n) << '\n';
    });
}

}  // namespace stcorr
