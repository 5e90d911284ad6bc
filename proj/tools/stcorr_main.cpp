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

// stcorr: exact tables, verification suites, simulations and figure data.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "stcorr/cli.hpp"
#include "stcorr/errors.hpp"
#include "stcorr/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// Writes to `path`, or stdout for "-" / empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") {
            stream_ = &std::cout;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        stream_ = file_.get();
    }
    std::ostream& stream() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw std::runtime_error("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

stcorr::Dynamics parse_dynamics(const std::string& s) {
    if (s == "sublattice") return stcorr::Dynamics::SublatticeParallel;
    return stcorr::Dynamics::RandomSequential;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-time correlations of the Gaussian lattice interface"};
    app.set_version_flag("--version", std::string(stcorr::kVersion));
    app.require_subcommand(1);

    const int env_workers = stcorr::workers_from_environment(1);

    // exact-table
    auto* exact = app.add_subcommand("exact-table", "Closed-form and asymptotic correlation table");
    std::int64_t et_t_max = 10, et_j_max = 10;
    std::string et_out;
    exact->add_option("--t-max", et_t_max, "Largest round count")->check(CLI::NonNegativeNumber);
    exact->add_option("--j-max", et_j_max, "Largest |j|")->check(CLI::NonNegativeNumber);
    exact->add_option("--out", et_out, "Output CSV path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "Run an invariant suite");
    std::string suite_name = "all";
    stcorr::VerifyOptions vopts;
    vopts.workers = env_workers;
    verify->add_option("suite", suite_name, "exact | spectral | oracle | mc | all")
        ->check(CLI::IsMember({"exact", "spectral", "oracle", "mc", "all"}));
    verify->add_option("--seed", vopts.seed, "Seed for the Monte Carlo checks");
    verify->add_option("--workers", vopts.workers, "Worker threads per half-sweep")->check(CLI::PositiveNumber);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the dynamics and record snapshot statistics");
    stcorr::SimConfig sim;
    sim.workers = env_workers;
    std::string sim_dynamics = "sublattice", sim_initial = "equilibrium", sim_out;
    simulate->add_option("--dynamics", sim_dynamics, "sublattice | sequential")
        ->check(CLI::IsMember({"sublattice", "sequential"}));
    simulate->add_option("--length", sim.L, "Lattice extent L")->required()->check(CLI::Range(2, 1 << 30));
    simulate->add_option("--dim", sim.d, "Dimension d")->check(CLI::Range(1, 8));
    simulate->add_option("--rounds", sim.measure_rounds, "Time units to record")->check(CLI::NonNegativeNumber);
    simulate->add_option("--warmup", sim.warmup_rounds, "Time units before the first snapshot")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", sim.seed, "64-bit seed");
    simulate->add_option("--snapshot-stride", sim.snapshot_stride, "Time units between snapshots")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--replicas", sim.replicas, "Independent replicas")->check(CLI::PositiveNumber);
    simulate->add_option("--workers", sim.workers, "Worker threads per half-sweep")->check(CLI::PositiveNumber);
    simulate->add_option("--initial", sim_initial, "equilibrium | flat")
        ->check(CLI::IsMember({"equilibrium", "flat"}));
    simulate->add_option("--out", sim_out, "Output CSV path (default stdout)");

    // fig2
    auto* fig2 = app.add_subcommand("fig2", "Scaled correlations at j = 0, 1 versus t");
    stcorr::Fig2Config f2;
    f2.workers = env_workers;
    std::string f2_dynamics = "sequential", f2_out;
    fig2->add_option("--length", f2.L, "Lattice extent L");
    fig2->add_option("--t1", f2.t1, "Number of time origins");
    fig2->add_option("--t-max", f2.t_max, "Largest time separation");
    fig2->add_option("--seed", f2.seed, "64-bit seed");
    fig2->add_option("--replicas", f2.replicas, "Independent replicas")->check(CLI::PositiveNumber);
    fig2->add_option("--blocks", f2.blocks, "Batch-means blocks");
    fig2->add_option("--workers", f2.workers, "Worker threads per half-sweep")->check(CLI::PositiveNumber);
    fig2->add_option("--dynamics", f2_dynamics, "sequential | sublattice")
        ->check(CLI::IsMember({"sublattice", "sequential"}));
    fig2->add_option("--out", f2_out, "Output CSV path (default stdout)");

    // fig3
    auto* fig3 = app.add_subcommand("fig3", "Correlations versus j at fixed t with shape fits");
    stcorr::Fig3Config f3;
    f3.workers = env_workers;
    std::string f3_dynamics = "sequential", f3_out;
    fig3->add_option("--length", f3.L, "Lattice extent L");
    fig3->add_option("--t1", f3.t1, "Number of time origins");
    fig3->add_option("--t", f3.t, "Time separation");
    fig3->add_option("--j-max", f3.j_max, "Largest |j|");
    fig3->add_option("--seed", f3.seed, "64-bit seed");
    fig3->add_option("--replicas", f3.replicas, "Independent replicas")->check(CLI::PositiveNumber);
    fig3->add_option("--blocks", f3.blocks, "Batch-means blocks");
    fig3->add_option("--workers", f3.workers, "Worker threads per half-sweep")->check(CLI::PositiveNumber);
    fig3->add_option("--dynamics", f3_dynamics, "sequential | sublattice")
        ->check(CLI::IsMember({"sublattice", "sequential"}));
    fig3->add_option("--out", f3_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*exact) {
            Output out(et_out);
            stcorr::write_exact_table(out.stream(), et_t_max, et_j_max);
            out.close();
        } else if (*verify) {
            const auto report = stcorr::run_verify(*stcorr::parse_suite(suite_name), vopts);
            stcorr::print_report(std::cout, report);
            return report.passed() ? kExitOk : kExitVerifyFailed;
        } else if (*simulate) {
            sim.dynamics = parse_dynamics(sim_dynamics);
            sim.initial = sim_initial == "flat" ? stcorr::InitialCondition::Flat
                                                : stcorr::InitialCondition::Equilibrium;
            sim.validate();
            Output out(sim_out);
            stcorr::write_simulation(out.stream(), sim);
            out.close();
        } else if (*fig2) {
            f2.dynamics = parse_dynamics(f2_dynamics);
            f2.validate();
            const auto result = stcorr::compute_fig2(f2);
            Output out(f2_out);
            stcorr::write_fig2(out.stream(), result);
            out.close();
        } else if (*fig3) {
            f3.dynamics = parse_dynamics(f3_dynamics);
            f3.validate();
            const auto result = stcorr::compute_fig3(f3);
            Output out(f3_out);
            stcorr::write_fig3(out.stream(), result);
            out.close();
        }
    } catch (const stcorr::DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
