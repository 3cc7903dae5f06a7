// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/simcore.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace thzcov::simcore {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long kChunk = 4096;  // scheduling granularity for the thread pool

double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

// Power on a serving-style link: both ends steer, each missing independently
// with the truncated-Gaussian error, then gamma fading on top.
double serving_power(const channel::SystemParams& params,
                     const antenna::ArrayConfig& bs,
                     const antenna::ArrayConfig& ue, double dist,
                     std::mt19937_64& rng) {
    const double gb = antenna::draw_misaligned(bs, rng) ? bs.gain_side
                                                        : bs.gain_main;
    const double gu = antenna::draw_misaligned(ue, rng) ? ue.gain_side
                                                        : ue.gain_main;
    return params.p_tx * gb * gu * channel::sample_fading(params, rng) *
           channel::path_loss(params, dist);
}

// Power on an interfering link: both beams point uniformly at random, so the
// main lobe is seen with probability beamwidth / 2 pi per side.
double interferer_power(const channel::SystemParams& params,
                        const antenna::ArrayConfig& bs,
                        const antenna::ArrayConfig& ue, double dist,
                        std::mt19937_64& rng) {
    const double gb = uniform01(rng) < bs.beamwidth / kTwoPi ? bs.gain_main
                                                             : bs.gain_side;
    const double gu = uniform01(rng) < ue.beamwidth / kTwoPi ? ue.gain_main
                                                             : ue.gain_side;
    return params.p_tx * gb * gu * channel::sample_fading(params, rng) *
           channel::path_loss(params, dist);
}

struct TrialOutcome {
    double cluster_radius = 0.0;
    double ref_power = 0.0, coop_power = 0.0, interference = 0.0;
    double sinr = 0.0;
    int members = 0;
    bool degenerate = false;
};

// Scores the LOS point set.  Distances arrive in generation order; roles, if
// requested, are written in the same order (0 reference, 1 member,
// 2 interferer).  Draw order is a stable contract: one serving or interferer
// draw per LOS point, taken in generation order.
TrialOutcome los_physics(const channel::SystemParams& params,
                         const antenna::ArrayConfig& bs,
                         const antenna::ArrayConfig& ue,
                         const cluster::ClusterConfig& cfg,
                         const SimConfig& sim, const std::vector<double>& los_d,
                         std::mt19937_64& rng, std::vector<int>* roles) {
    TrialOutcome out;
    if (roles) roles->assign(los_d.size(), 2);
    if (los_d.empty()) {
        out.degenerate = true;
        return out;
    }
    std::size_t ref = 0;
    for (std::size_t i = 1; i < los_d.size(); ++i) {
        if (los_d[i] < los_d[ref]) ref = i;
    }
    const double r_used = std::max(los_d[ref], sim.min_dist);
    const double big_r = r_used / cfg.delta;
    out.cluster_radius = big_r;
    for (std::size_t i = 0; i < los_d.size(); ++i) {
        const double link = std::max(los_d[i], sim.min_dist);
        if (i == ref) {
            out.ref_power = serving_power(params, bs, ue, link, rng);
            if (roles) (*roles)[i] = 0;
        } else if (los_d[i] <= big_r) {
            out.coop_power += serving_power(params, bs, ue, link, rng);
            ++out.members;
            if (roles) (*roles)[i] = 1;
        } else {
            out.interference += interferer_power(params, bs, ue, link, rng);
        }
    }
    const double denom = out.interference + params.noise_power;
    out.sinr = denom > 0.0 ? (out.ref_power + out.coop_power) / denom
                           : std::numeric_limits<double>::infinity();
    return out;
}

// Deployment draw used by every entry point.  Per point the stream is
// consumed as: radius uniform, angle uniform, mark uniform.  Keep
// realize_network in lockstep with this.
void draw_los_distances(const channel::SystemParams& params,
                        const SimConfig& sim, std::mt19937_64& rng,
                        std::vector<double>& los_d) {
    los_d.clear();
    const double w = sim.window_radius;
    const long n = std::poisson_distribution<long>{
        params.bs_density * std::numbers::pi * w * w}(rng);
    for (long i = 0; i < n; ++i) {
        const double r = w * std::sqrt(uniform01(rng));
        uniform01(rng);  // angle, irrelevant to any power
        if (uniform01(rng) < channel::los_probability(params, r)) {
            los_d.push_back(r);
        }
    }
}

TrialOutcome simulate_trial(const channel::SystemParams& params,
                            const antenna::ArrayConfig& bs,
                            const antenna::ArrayConfig& ue,
                            const cluster::ClusterConfig& cfg,
                            const SimConfig& sim, std::mt19937_64& rng,
                            std::vector<double>& scratch) {
    draw_los_distances(params, sim, rng, scratch);
    return los_physics(params, bs, ue, cfg, sim, scratch, rng, nullptr);
}

int resolve_threads(int requested, long n_chunks) {
    int n = requested;
    if (n <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw > 0 ? static_cast<int>(hw) : 1;
    }
    return static_cast<int>(std::min<long>(n, n_chunks));
}

// Runs fn(chunk, rng) over all chunks with substream-seeded generators.
template <typename Fn>
void run_chunks(const SimConfig& sim, const EstimateOptions& opts,
                long n_chunks, Fn&& fn) {
    std::atomic<long> next{0};
    auto worker = [&] {
        std::mt19937_64 rng;
        for (;;) {
            const long c = next.fetch_add(1);
            if (c >= n_chunks) break;
            fn(c, rng);
        }
    };
    const int n_threads = resolve_threads(opts.n_threads, n_chunks);
    if (n_threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t key,
                            std::uint64_t trial) {
    std::uint64_t z = seed;
    for (std::uint64_t v : {key, trial}) {
        z += 0x9e3779b97f4a7c15ULL + v;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
    }
    return z;
}

void validate(const channel::SystemParams& params, const SimConfig& sim) {
    channel::validate(params);
    if (!(sim.window_radius > 0.0)) {
        throw std::invalid_argument("SimConfig: window_radius must be > 0");
    }
    if (sim.n_trials < 1) {
        throw std::invalid_argument("SimConfig: n_trials must be >= 1");
    }
    if (!(sim.min_dist > 0.0) || sim.min_dist >= sim.window_radius) {
        throw std::invalid_argument(
            "SimConfig: min_dist must lie in (0, window_radius)");
    }
    if (params.blockage_rate * sim.window_radius < 7.0) {
        // beyond this the window clips non-negligible LOS mass
        throw std::invalid_argument(
            "SimConfig: window_radius too small, need blockage_rate * "
            "window_radius >= 7");
    }
}

void realize_network(const channel::SystemParams& params, const SimConfig& sim,
                     std::mt19937_64& rng, NetworkRealization& out) {
    out = NetworkRealization{};
    const double w = sim.window_radius;
    const long n = std::poisson_distribution<long>{
        params.bs_density * std::numbers::pi * w * w}(rng);
    out.x.reserve(n);
    out.y.reserve(n);
    out.dist.reserve(n);
    out.los.reserve(n);
    for (long i = 0; i < n; ++i) {
        const double r = w * std::sqrt(uniform01(rng));
        const double phi = kTwoPi * uniform01(rng);
        const bool vis = uniform01(rng) < channel::los_probability(params, r);
        out.x.push_back(r * std::cos(phi));
        out.y.push_back(r * std::sin(phi));
        out.dist.push_back(r);
        out.los.push_back(vis ? 1 : 0);
    }
}

NetworkRealization run_trial(const channel::SystemParams& params,
                             const antenna::ArrayConfig& bs,
                             const antenna::ArrayConfig& ue,
                             const cluster::ClusterConfig& cfg,
                             const SimConfig& sim, std::mt19937_64& rng) {
    cluster::validate(cfg);
    NetworkRealization net;
    realize_network(params, sim, rng, net);
    std::vector<double> los_d;
    std::vector<int> los_idx;
    for (std::size_t i = 0; i < net.dist.size(); ++i) {
        if (net.los[i]) {
            los_d.push_back(net.dist[i]);
            los_idx.push_back(static_cast<int>(i));
        }
    }
    std::vector<int> roles;
    const TrialOutcome res =
        los_physics(params, bs, ue, cfg, sim, los_d, rng, &roles);
    net.degenerate = res.degenerate;
    net.cluster_radius = res.cluster_radius;
    net.ref_power = res.ref_power;
    net.coop_power = res.coop_power;
    net.interference = res.interference;
    net.sinr = res.sinr;
    for (std::size_t k = 0; k < roles.size(); ++k) {
        if (roles[k] == 0) net.ref_index = los_idx[k];
        if (roles[k] == 1) net.cluster_members.push_back(los_idx[k]);
    }
    return net;
}

CoverageEstimate estimate_coverage(const channel::SystemParams& params,
                                   const antenna::ArrayConfig& bs,
                                   const antenna::ArrayConfig& ue,
                                   const cluster::ClusterConfig& cfg,
                                   const SimConfig& sim,
                                   const std::vector<double>& sinr_thresholds,
                                   const EstimateOptions& opts) {
    validate(params, sim);
    cluster::validate(cfg);
    if (sinr_thresholds.empty()) {
        throw std::invalid_argument("estimate_coverage: no thresholds given");
    }
    const long n_chunks = (sim.n_trials + kChunk - 1) / kChunk;
    const std::size_t n_thr = sinr_thresholds.size();

    struct Tally {
        std::vector<long> covered;
        long degenerate = 0;
    };
    std::vector<Tally> tallies(n_chunks);
    if (opts.records) opts.records->assign(sim.n_trials, TrialRecord{});

    run_chunks(sim, opts, n_chunks, [&](long c, std::mt19937_64& rng) {
        Tally& tally = tallies[c];
        tally.covered.assign(n_thr, 0);
        std::vector<double> scratch;
        const long lo = c * kChunk;
        const long hi = std::min(sim.n_trials, lo + kChunk);
        for (long t = lo; t < hi; ++t) {
            // per-trial substream: variate consumption cannot leak across
            // trials, so paired runs stay aligned trial for trial
            rng.seed(derive_stream(sim.seed, opts.stream_key,
                                   static_cast<std::uint64_t>(t)));
            const TrialOutcome res =
                simulate_trial(params, bs, ue, cfg, sim, rng, scratch);
            if (res.degenerate) {
                ++tally.degenerate;
            } else {
                for (std::size_t k = 0; k < n_thr; ++k) {
                    if (res.sinr > sinr_thresholds[k]) ++tally.covered[k];
                }
            }
            if (opts.records) {
                (*opts.records)[t] =
                    TrialRecord{res.cluster_radius, res.members,  res.ref_power,
                                res.coop_power,     res.interference, res.sinr};
            }
        }
    });

    CoverageEstimate est;
    est.trials = sim.n_trials;
    std::vector<long> covered(n_thr, 0);
    for (const auto& tally : tallies) {
        est.degenerate_trials += tally.degenerate;
        for (std::size_t k = 0; k < n_thr; ++k) covered[k] += tally.covered[k];
    }
    const double n = static_cast<double>(sim.n_trials);
    const double live = n - static_cast<double>(est.degenerate_trials);
    est.points.reserve(n_thr);
    for (std::size_t k = 0; k < n_thr; ++k) {
        CoveragePoint pt;
        pt.sinr_threshold = sinr_thresholds[k];
        pt.probability = static_cast<double>(covered[k]) / n;
        pt.std_error =
            std::sqrt(pt.probability * (1.0 - pt.probability) / n);
        pt.conditioned =
            live > 0.0 ? static_cast<double>(covered[k]) / live : 0.0;
        est.points.push_back(pt);
    }
    return est;
}

std::vector<double> collect_interference_samples(
    const channel::SystemParams& params, const antenna::ArrayConfig& bs,
    const antenna::ArrayConfig& ue, const SimConfig& sim, double radius,
    const EstimateOptions& opts) {
    validate(params, sim);
    if (!(radius > 0.0) || radius >= sim.window_radius) {
        throw std::invalid_argument(
            "collect_interference_samples: radius must lie in "
            "(0, window_radius)");
    }
    std::vector<double> samples(sim.n_trials, 0.0);
    const long n_chunks = (sim.n_trials + kChunk - 1) / kChunk;
    run_chunks(sim, opts, n_chunks, [&](long c, std::mt19937_64& rng) {
        std::vector<double> scratch;
        const long lo = c * kChunk;
        const long hi = std::min(sim.n_trials, lo + kChunk);
        for (long t = lo; t < hi; ++t) {
            rng.seed(derive_stream(sim.seed, opts.stream_key,
                                   static_cast<std::uint64_t>(t)));
            draw_los_distances(params, sim, rng, scratch);
            double total = 0.0;
            for (const double d : scratch) {
                if (d > radius) {
                    total += interferer_power(params, bs, ue,
                                              std::max(d, sim.min_dist), rng);
                }
            }
            samples[t] = total;
        }
    });
    return samples;
}

}  // namespace thzcov::simcore
