// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "thzcov/analytic.hpp"
#include "thzcov/channel.hpp"
#include "thzcov/cluster.hpp"
#include "thzcov/simcore.hpp"

namespace thzcov::cli {

enum class Backend { analytic, mc, both };

// A fully resolved run description.  Boundary units (dBm, degrees, dB) are
// converted to SI/linear here; everything downstream is unit-clean.
struct RunSpec {
    channel::SystemParams params{};
    int n_b = 8;
    int n_u = 8;
    // Radians; parse_runspec's baseline sets both to 10 degrees.
    double sigma_b = 0.0;
    double sigma_u = 0.0;
    // When set, the BS pattern is derived from this main-lobe width instead
    // of the element count (smooth beamwidth sweeps).
    bool continuous_theta = false;
    double theta_b = 0.0;  // radians
    cluster::ClusterConfig cluster{};
    simcore::SimConfig sim{};
    double gamma_db = 0.0;
    Backend backend = Backend::both;
    analytic::MomentMode moment_mode = analytic::MomentMode::campbell;
    analytic::FadingAverage fading_avg = analytic::FadingAverage::quadrature;
    bool paired = false;
    int n_threads = 0;  // 0 = hardware concurrency
    std::string output_path = "results.csv";

    struct Sweep {
        std::string name;  // one of the sweepable keys below
        std::vector<double> values;
    };
    std::vector<Sweep> sweeps;  // at most two; grid = cartesian product
};

// Keys accepted in `sweep <key> = ...` lines and validated on load.
const std::vector<std::string>& sweepable_keys();

// Applies one sweepable key to a resolved spec, using the same boundary-unit
// conversions as the parser.  Throws std::invalid_argument on bad values.
void apply_sweep_value(RunSpec& spec, const std::string& key, double value);

struct RunSpecError : std::runtime_error {
    RunSpecError(int line, const std::string& what)
        : std::runtime_error(what), line(line) {}
    int line;  // 0 when not tied to a specific config line
};

// Parses the flat key = value config format (see README).  An empty file
// yields the defaults above.  Throws RunSpecError with the offending line
// number and the violated constraint.
RunSpec load_runspec(const std::string& path);

// Same parser over an in-memory config body.
RunSpec parse_runspec(const std::string& text);

// Named sweep bundles reproducing the four standard figure families:
// threshold, beamwidth, misalignment, and density sweeps.
RunSpec preset(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace thzcov::cli
