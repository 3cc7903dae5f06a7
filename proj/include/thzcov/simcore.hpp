// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "thzcov/antenna.hpp"
#include "thzcov/channel.hpp"
#include "thzcov/cluster.hpp"

namespace thzcov::simcore {

struct SimConfig {
    double window_radius = 1000.0;  // disk radius [m]; beta * radius >= 7
    long n_trials = 10000;
    std::uint64_t seed = 1;
    double min_dist = 0.1;  // link-distance floor [m]
};

void validate(const channel::SystemParams& params, const SimConfig& sim);

// One realized deployment with its marks and SINR decomposition.  Positions
// cover every generated BS (LOS or not); indices below refer into them.
struct NetworkRealization {
    std::vector<double> x, y, dist;
    std::vector<std::uint8_t> los;
    int ref_index = -1;                // nearest LOS BS; -1 when none exists
    double cluster_radius = 0.0;       // R = r / delta
    std::vector<int> cluster_members;  // LOS BSs in (r, R], reference excluded
    double ref_power = 0.0;            // reference-link received power
    double coop_power = 0.0;           // cluster-member sum
    double interference = 0.0;         // LOS BSs beyond R
    double sinr = 0.0;                 // +inf when the denominator is zero
    bool degenerate = false;           // no LOS BS in the window
};

// Draws the Poisson(lambda_b pi W^2) deployment, uniform positions in the
// disk, independent LOS marks exp(-beta r).
void realize_network(const channel::SystemParams& params, const SimConfig& sim,
                     std::mt19937_64& rng, NetworkRealization& out);

// Full single-trial pipeline: deployment, reference selection, cluster
// assembly, per-link gain states and fading, SINR.
NetworkRealization run_trial(const channel::SystemParams& params,
                             const antenna::ArrayConfig& bs,
                             const antenna::ArrayConfig& ue,
                             const cluster::ClusterConfig& cfg,
                             const SimConfig& sim, std::mt19937_64& rng);

struct CoveragePoint {
    double sinr_threshold = 1.0;     // gamma, linear
    double probability = 0.0;        // LOS-void trials count as uncovered
    double std_error = 0.0;          // binomial
    double conditioned = 0.0;        // probability given a nonvoid window
};

struct CoverageEstimate {
    std::vector<CoveragePoint> points;  // one per threshold, input order
    long trials = 0;
    long degenerate_trials = 0;
};

// Per-trial records for diagnostics and dumps.
struct TrialRecord {
    double cluster_radius;
    int cluster_count;
    double ref_power, coop_power, interference, sinr;
};

struct EstimateOptions {
    int n_threads = 0;           // 0 = hardware concurrency
    // Offsets the substream derivation; points sharing a stream_key (and
    // seed) see identical randomness, giving common random numbers across
    // sweep points when pairing is requested.
    std::uint64_t stream_key = 0;
    std::vector<TrialRecord>* records = nullptr;  // optional, trial order
};

// Single pass over the trials scoring every threshold at once.  Every trial
// runs on its own substream derived from (seed, stream_key, trial), so
// results are bit-reproducible for a given seed and config regardless of
// thread count, and runs sharing seed and stream_key see identical
// realizations trial for trial.
CoverageEstimate estimate_coverage(const channel::SystemParams& params,
                                   const antenna::ArrayConfig& bs,
                                   const antenna::ArrayConfig& ue,
                                   const cluster::ClusterConfig& cfg,
                                   const SimConfig& sim,
                                   const std::vector<double>& sinr_thresholds,
                                   const EstimateOptions& opts = {});

// Aggregate out-of-cluster interference at a pinned exclusion radius, one
// sample per trial (cluster geometry bypassed).  Deterministic trial order.
std::vector<double> collect_interference_samples(
    const channel::SystemParams& params, const antenna::ArrayConfig& bs,
    const antenna::ArrayConfig& ue, const SimConfig& sim, double radius,
    const EstimateOptions& opts = {});

// Substream derivation helper (splitmix64 chain), exposed for tests.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t key,
                            std::uint64_t trial);

}  // namespace thzcov::simcore
