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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "stcorr/cli.hpp"
#include "stcorr/errors.hpp"
#include "stcorr/estimators.hpp"
#include "stcorr/exact_correlations.hpp"
#include "stcorr/gaussian_oracle.hpp"
#include "stcorr/simulator.hpp"
#include "stcorr/spectral.hpp"

namespace py = pybind11;
using namespace stcorr;

namespace {

CorrelationKind kind_arg(const py::handle& h) {
    if (py::isinstance<py::str>(h)) {
        const auto name = h.cast<std::string>();
        if (auto k = parse_kind(name)) return *k;
        throw py::value_error("unknown correlation kind '" + name + "'");
    }
    return h.cast<CorrelationKind>();
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

SimConfig sim_config(std::int64_t L, int d, Dynamics dynamics, std::uint64_t seed, std::int64_t warmup,
                     std::int64_t rounds, std::int64_t stride, int replicas, InitialCondition initial) {
    SimConfig c;
    c.L = L;
    c.d = d;
    c.dynamics = dynamics;
    c.seed = seed;
    c.warmup_rounds = warmup;
    c.measure_rounds = rounds;
    c.snapshot_stride = stride;
    c.replicas = replicas;
    c.initial = initial;
    return c;
}

py::dict measure_py(std::int64_t L, std::int64_t t_max, std::int64_t j_max, std::int64_t origins,
                    const py::list& kinds, Dynamics dynamics, std::uint64_t seed, std::int64_t warmup,
                    int replicas, int blocks) {
    EstimatorConfig cfg;
    cfg.kinds.clear();
    for (const auto& k : kinds) cfg.kinds.push_back(kind_arg(k));
    cfg.t_max = t_max;
    cfg.j_max = j_max;
    cfg.origins = origins;
    cfg.blocks = blocks;
    auto sim = sim_config(L, 1, dynamics, seed, warmup, 0, 1, replicas, InitialCondition::Equilibrium);

    CorrelationEstimator est = [&] {
        py::gil_scoped_release release;
        return measure(sim, cfg);
    }();

    const py::ssize_t nt = t_max + 1, nj = 2 * j_max + 1;
    py::dict result;
    for (auto kind : cfg.kinds) {
        const auto& acc = est.accumulator(kind);
        py::array_t<double> mean({nt, nj}), err({nt, nj});
        auto m = mean.mutable_unchecked<2>();
        auto e = err.mutable_unchecked<2>();
        for (std::int64_t t = 0; t <= t_max; ++t) {
            for (std::int64_t j = -j_max; j <= j_max; ++j) {
                const bool ok = t >= min_rounds(kind) && parity_ok(kind, j) && acc.count(t) > 0;
                m(t, j + j_max) = ok ? acc.mean(t, j) : std::nan("");
                e(t, j + j_max) = ok ? acc.standard_error(t, j) : std::nan("");
            }
        }
        py::dict entry;
        entry["mean"] = mean;
        entry["err"] = err;
        result[py::str(std::string(short_name(kind)))] = entry;
    }
    return result;
}

py::list simulate_py(std::int64_t L, int d, Dynamics dynamics, std::uint64_t seed, std::int64_t warmup,
                     std::int64_t rounds, std::int64_t stride, int replicas, InitialCondition initial) {
    const auto cfg = sim_config(L, d, dynamics, seed, warmup, rounds, stride, replicas, initial);
    std::vector<std::vector<double>> frames;
    {
        py::gil_scoped_release release;
        run(cfg, [&](const Snapshot& s) { frames.emplace_back(s.state.heights().begin(), s.state.heights().end()); });
    }
    py::list out;
    for (const auto& f : frames) {
        auto a = to_array(f);
        if (d > 1) {
            std::vector<py::ssize_t> shape(static_cast<std::size_t>(d), static_cast<py::ssize_t>(L));
            a = a.reshape(shape);
        }
        out.append(a);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_stcorr, m) {
    m.doc() = "Bindings for the stcorr C++ library.";
    m.attr("__version__") = kVersion;

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParityError>(m, "ParityError", domain.ptr());
    py::register_exception<ZeroModeError>(m, "ZeroModeError", domain.ptr());
    py::register_exception<FiniteSizeError>(m, "FiniteSizeError", PyExc_RuntimeError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<CorrelationKind>(m, "CorrelationKind")
        .value("G11", CorrelationKind::SpaceSpace)
        .value("G22", CorrelationKind::TimeTime)
        .value("G12", CorrelationKind::SpaceTime)
        .value("G21", CorrelationKind::TimeSpace);
    py::enum_<Dynamics>(m, "Dynamics")
        .value("SUBLATTICE", Dynamics::SublatticeParallel)
        .value("SEQUENTIAL", Dynamics::RandomSequential);
    py::enum_<InitialCondition>(m, "InitialCondition")
        .value("EQUILIBRIUM", InitialCondition::Equilibrium)
        .value("FLAT", InitialCondition::Flat);
    py::enum_<FieldKind>(m, "FieldKind").value("FREE", FieldKind::Free).value("PERIODIC", FieldKind::Periodic);

    m.def("g11_exact", &g11_exact, py::arg("t"), py::arg("j"));
    m.def("g22_exact", &g22_exact, py::arg("t"), py::arg("j"));
    m.def("g12_exact", &g12_exact, py::arg("t"), py::arg("j"));
    m.def("g21_exact", &g21_exact, py::arg("t"), py::arg("j"));
    m.def("g11_asym", py::vectorize(&g11_asym), py::arg("t"), py::arg("j"));
    m.def("g22_asym", py::vectorize(&g22_asym), py::arg("t"), py::arg("j"));
    m.def("g12_asym", py::vectorize(&g12_asym), py::arg("t"), py::arg("j"));
    m.def("g21_asym", py::vectorize(&g21_asym), py::arg("t"), py::arg("j"));
    m.def("g11_quadrature", &g11_quadrature, py::arg("t"), py::arg("j"));
    m.def(
        "exact", [](const py::handle& kind, std::int64_t t, std::int64_t j) { return exact(kind_arg(kind), t, j); },
        py::arg("kind"), py::arg("t"), py::arg("j"));
    m.def(
        "asymptotic", [](const py::handle& kind, double t, double j) { return asymptotic(kind_arg(kind), t, j); },
        py::arg("kind"), py::arg("t"), py::arg("j"));
    m.def("displacement_correlation_asym", py::vectorize(&displacement_correlation_asym), py::arg("t"),
          py::arg("j"), "Asymptotic E(h(t)_j - h(0)_0)^2; t counts half-sweeps.");
    m.def(
        "exact_table",
        [](std::int64_t t_max, std::int64_t j_max) {
            std::ostringstream os;
            write_exact_table(os, t_max, j_max);
            return os.str();
        },
        py::arg("t_max"), py::arg("j_max"), "The CSV table printed by `stcorr exact`.");

    m.def("equilibrium_gradient_variance", &equilibrium_gradient_variance, py::arg("L"), py::arg("j"));
    m.def("poisson_kernel", &poisson_kernel, py::arg("a"), py::arg("n"));
    m.def(
        "sample_equilibrium",
        [](std::int64_t L, int d, std::uint64_t seed, std::uint32_t replica) {
            auto a = to_array(sample_equilibrium(L, d, seed, replica));
            if (d > 1) a = a.reshape(std::vector<py::ssize_t>(static_cast<std::size_t>(d), L));
            return a;
        },
        py::arg("L"), py::arg("d") = 1, py::arg("seed") = 1, py::arg("replica") = 0);

    m.def(
        "oracle_pair_correlation",
        [](const py::handle& kind, std::int64_t t, std::int64_t j, std::int64_t T, std::int64_t L,
           FieldKind field) {
            const auto spec = QuadraticFormSpec::make(field, T, L);
            py::gil_scoped_release release;
            return spacetime_pair_correlation(spec, kind_arg(kind), t, j);
        },
        py::arg("kind"), py::arg("t"), py::arg("j"), py::arg("T"), py::arg("L"),
        py::arg("field") = FieldKind::Periodic, "Dense Gaussian-field value on a finite torus.");
    m.def("prop2_gap", &prop2_gap, py::arg("T"), py::arg("T1"), py::arg("L"));

    m.def("simulate", &simulate_py, py::arg("L"), py::arg("d") = 1,
          py::arg("dynamics") = Dynamics::SublatticeParallel, py::arg("seed") = 1, py::arg("warmup") = 0,
          py::arg("rounds") = 0, py::arg("stride") = 1, py::arg("replicas") = 1,
          py::arg("initial") = InitialCondition::Equilibrium,
          "Height snapshots, one array per snapshot, replicas in order.");
    py::list default_kinds;
    for (const char* k : {"g11", "g22", "g12"}) default_kinds.append(k);
    m.def("measure", &measure_py, py::arg("L"), py::arg("t_max"), py::arg("j_max"), py::arg("origins") = 1,
          py::arg("kinds") = default_kinds,
          py::arg("dynamics") = Dynamics::SublatticeParallel, py::arg("seed") = 1, py::arg("warmup") = 0,
          py::arg("replicas") = 1, py::arg("blocks") = kDefaultBlocks,
          "Estimated correlations: {kind: {'mean', 'err'}} arrays indexed [t, j + j_max].");
}
