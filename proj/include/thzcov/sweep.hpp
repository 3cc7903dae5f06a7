// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thzcov/runspec.hpp"

namespace thzcov::cli {

// One grid point evaluated by one backend.  Empty error means success;
// failed points keep their row with the message and no coverage value.
struct ResultRow {
    std::string backend;  // "analytic" | "mc"
    double gamma_db = 0.0;
    double delta = 0.0;
    double lambda_b = 0.0;
    double n_b = 0.0;
    double n_u = 0.0;
    double theta_b_deg = 0.0;
    double theta_u_deg = 0.0;
    double sigma_b_deg = 0.0;
    double sigma_u_deg = 0.0;
    double p_tx_dbm = 0.0;
    double alpha = 0.0;
    double k_a = 0.0;
    double beta = 0.0;
    double fading_m = 0.0;
    double fading_omega = 0.0;
    double noise_w = 0.0;
    long trials = 0;  // 0 on analytic rows
    std::optional<double> coverage;
    std::optional<double> mc_stderr;
    double wall_ms = 0.0;  // recorded in the manifest, not the CSV
    std::string error;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    double total_wall_ms = 0.0;
};

// Evaluates the sweep grid.  Rows come out in deterministic order: sweep
// values in spec order (first sweep outer), analytic before mc.  Monte Carlo
// runs scoring a swept SINR threshold share one trial pass per remaining
// grid coordinate.  Per-point failures are captured in the row.
ResultTable run_sweep(const RunSpec& spec);

// Writes the RFC 4180 result table (fixed column order, 12 significant
// digits) and a JSON manifest sidecar (<path>.manifest.json) holding the
// resolved spec, seed, git revision, timestamps, and wall times.
void emit_csv(const ResultTable& table, const RunSpec& spec,
              const std::string& path);

// The fixed CSV header.
const std::string& csv_header();

}  // namespace thzcov::cli
