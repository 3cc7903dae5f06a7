// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "thzcov/runspec.hpp"
#include "thzcov/sweep.hpp"

// Exit codes: 0 success, 1 bad usage or config, 2 runtime failure (a failed
// grid point still writes its row and the rest of the table).
int main(int argc, char** argv) {
    CLI::App app{"coverage sweeps for beam-misaligned THz networks"};

    std::string preset_name, config_path, backend, mode, out_path;
    long trials = -1;
    long long seed = -1;
    int threads = -1;
    bool paired = false;

    app.add_option("--preset", preset_name, "named sweep bundle")
        ->check(CLI::IsMember(thzcov::cli::preset_names()));
    app.add_option("--config", config_path, "config file (key = value)");
    app.add_option("--backend", backend, "analytic, mc, or both")
        ->check(CLI::IsMember({"analytic", "mc", "both"}));
    app.add_option("--trials", trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "base RNG seed")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--mode", mode, "analytic moment mode")
        ->check(CLI::IsMember({"corrected", "legacy"}));
    app.add_option("--threads", threads, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--paired", paired,
                 "common random numbers across sweep points");

    CLI11_PARSE(app, argc, argv);

    if (!preset_name.empty() && !config_path.empty()) {
        std::fprintf(stderr, "error: --preset and --config are exclusive\n");
        return 1;
    }

    thzcov::cli::RunSpec spec;
    try {
        if (!preset_name.empty()) {
            spec = thzcov::cli::preset(preset_name);
        } else if (!config_path.empty()) {
            spec = thzcov::cli::load_runspec(config_path);
        } else {
            spec = thzcov::cli::parse_runspec("");
        }
    } catch (const thzcov::cli::RunSpecError& e) {
        if (e.line > 0) {
            std::fprintf(stderr, "error: %s line %d: %s\n",
                         config_path.c_str(), e.line, e.what());
        } else {
            std::fprintf(stderr, "error: %s\n", e.what());
        }
        return 1;
    }

    if (!backend.empty()) {
        spec.backend = backend == "analytic" ? thzcov::cli::Backend::analytic
                       : backend == "mc"     ? thzcov::cli::Backend::mc
                                             : thzcov::cli::Backend::both;
    }
    if (!mode.empty()) {
        spec.moment_mode = mode == "legacy"
                               ? thzcov::analytic::MomentMode::legacy
                               : thzcov::analytic::MomentMode::campbell;
    }
    if (trials > 0) spec.sim.n_trials = trials;
    if (seed >= 0) spec.sim.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) spec.n_threads = threads;
    if (paired) spec.paired = true;
    if (!out_path.empty()) spec.output_path = out_path;

    try {
        const auto table = thzcov::cli::run_sweep(spec);
        thzcov::cli::emit_csv(table, spec, spec.output_path);
        long failed = 0;
        for (const auto& row : table.rows) {
            if (!row.error.empty()) ++failed;
        }
        std::printf("%zu rows -> %s (%.1f ms)\n", table.rows.size(),
                    spec.output_path.c_str(), table.total_wall_ms);
        if (failed > 0) {
            std::fprintf(stderr, "error: %ld of %zu grid points failed\n",
                         failed, table.rows.size());
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
