// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include "thzcov/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "thzcov/units.hpp"

#ifndef THZCOV_GIT_REVISION
#define THZCOV_GIT_REVISION "unknown"
#endif

namespace thzcov::cli {
namespace {

using json = nlohmann::json;
using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point since) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - since)
        .count();
}

antenna::ArrayConfig bs_array(const RunSpec& s) {
    return s.continuous_theta
               ? antenna::derive_array_from_beamwidth(s.theta_b, s.sigma_b)
               : antenna::derive_array(s.n_b, s.sigma_b);
}

antenna::ArrayConfig ue_array(const RunSpec& s) {
    return antenna::derive_array(s.n_u, s.sigma_u);
}

// Scalar coordinates first so a failing array derivation still leaves the
// row identifying its grid point.
void fill_row(ResultRow& row, const RunSpec& s) {
    row.gamma_db = s.gamma_db;
    row.delta = s.cluster.delta;
    row.lambda_b = s.params.bs_density;
    row.sigma_b_deg = units::rad_to_deg(s.sigma_b);
    row.sigma_u_deg = units::rad_to_deg(s.sigma_u);
    row.p_tx_dbm = units::watts_to_dbm(s.params.p_tx);
    row.alpha = s.params.pathloss_exp;
    row.k_a = s.params.absorption;
    row.beta = s.params.blockage_rate;
    row.fading_m = s.params.fading_shape;
    row.fading_omega = s.params.fading_scale;
    row.noise_w = s.params.noise_power;
    const auto bs = bs_array(s);
    const auto ue = ue_array(s);
    row.n_b = bs.n_elements;
    row.n_u = ue.n_elements;
    row.theta_b_deg = units::rad_to_deg(bs.beamwidth);
    row.theta_u_deg = units::rad_to_deg(ue.beamwidth);
}

analytic::CoverageQuery make_query(const RunSpec& s) {
    analytic::CoverageQuery q;
    q.sinr_threshold = units::db_to_linear(s.gamma_db);
    q.moment_mode = s.moment_mode;
    q.fading_avg = s.fading_avg;
    // legacy mode reproduces the unscaled threshold placement as well
    q.placement = s.moment_mode == analytic::MomentMode::legacy
                      ? analytic::ThresholdPlacement::legacy
                      : analytic::ThresholdPlacement::balanced;
    return q;
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string iso_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::analytic: return "analytic";
        case Backend::mc: return "mc";
        default: return "both";
    }
}

}  // namespace

ResultTable run_sweep(const RunSpec& spec) {
    const auto t_total = clock_type::now();
    // Normalize to a two-level grid; missing sweeps collapse to one value.
    const bool has0 = !spec.sweeps.empty();
    const bool has1 = spec.sweeps.size() > 1;
    const std::size_t len0 = has0 ? spec.sweeps[0].values.size() : 1;
    const std::size_t len1 = has1 ? spec.sweeps[1].values.size() : 1;
    const int gamma_dim = has0 && spec.sweeps[0].name == "gamma_db"   ? 0
                          : has1 && spec.sweeps[1].name == "gamma_db" ? 1
                                                                      : -1;
    const bool want_analytic = spec.backend != Backend::mc;
    const bool want_mc = spec.backend != Backend::analytic;

    auto resolve = [&](std::size_t i, std::size_t j) {
        RunSpec s = spec;
        s.sweeps.clear();
        if (has0) apply_sweep_value(s, spec.sweeps[0].name, spec.sweeps[0].values[i]);
        if (has1) apply_sweep_value(s, spec.sweeps[1].name, spec.sweeps[1].values[j]);
        return s;
    };

    // Grouped Monte Carlo passes: when gamma is swept, one trial stream
    // scores every threshold along that axis at once.
    struct McCell {
        double coverage = 0.0, stderr_est = 0.0, wall_ms = 0.0;
        long trials = 0;
        std::string error;
        bool filled = false;
    };
    std::vector<McCell> mc(len0 * len1);
    auto mc_at = [&](std::size_t i, std::size_t j) -> McCell& {
        return mc[i * len1 + j];
    };

    if (want_mc) {
        const std::size_t outer = gamma_dim == 0 ? len1 : len0;
        const std::size_t inner = gamma_dim == 0 ? len0 : len1;
        for (std::size_t g = 0; g < outer; ++g) {
            // resolve with the non-gamma coordinate; gamma enters via the
            // threshold list only
            const std::size_t i0 = gamma_dim == 0 ? 0 : g;
            const std::size_t j0 = gamma_dim == 0 ? g : 0;
            const auto t0 = clock_type::now();
            try {
                const RunSpec s = resolve(i0, j0);
                std::vector<double> thresholds;
                if (gamma_dim < 0) {
                    thresholds.push_back(units::db_to_linear(s.gamma_db));
                } else {
                    for (const double gdb : spec.sweeps[gamma_dim].values) {
                        thresholds.push_back(units::db_to_linear(gdb));
                    }
                }
                simcore::EstimateOptions opts;
                opts.n_threads = spec.n_threads;
                opts.stream_key = spec.paired ? 0 : g;
                const auto est = simcore::estimate_coverage(
                    s.params, bs_array(s), ue_array(s), s.cluster, s.sim,
                    thresholds, opts);
                const double wall = elapsed_ms(t0) / inner;
                for (std::size_t k = 0; k < inner; ++k) {
                    const std::size_t i = gamma_dim == 0 ? k : g;
                    const std::size_t j = gamma_dim == 0 ? g : k;
                    McCell& cell = mc_at(i, j);
                    const auto& pt =
                        est.points[gamma_dim < 0 ? 0 : k];
                    cell.coverage = pt.probability;
                    cell.stderr_est = pt.std_error;
                    cell.trials = est.trials;
                    cell.wall_ms = wall;
                    cell.filled = true;
                }
            } catch (const std::exception& e) {
                const double wall = elapsed_ms(t0) / inner;
                for (std::size_t k = 0; k < inner; ++k) {
                    const std::size_t i = gamma_dim == 0 ? k : g;
                    const std::size_t j = gamma_dim == 0 ? g : k;
                    McCell& cell = mc_at(i, j);
                    cell.error = e.what();
                    cell.wall_ms = wall;
                    cell.filled = true;
                }
            }
        }
    }

    ResultTable table;
    for (std::size_t i = 0; i < len0; ++i) {
        for (std::size_t j = 0; j < len1; ++j) {
            RunSpec s;
            std::string resolve_error;
            try {
                s = resolve(i, j);
            } catch (const std::exception& e) {
                resolve_error = e.what();
            }
            if (want_analytic) {
                const auto t0 = clock_type::now();
                ResultRow row;
                row.backend = "analytic";
                try {
                    if (!resolve_error.empty()) {
                        throw std::runtime_error(resolve_error);
                    }
                    fill_row(row, s);
                    const auto res = analytic::coverage_probability(
                        s.params, bs_array(s), ue_array(s), s.cluster,
                        make_query(s));
                    row.coverage = res.probability;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                row.wall_ms = elapsed_ms(t0);
                table.rows.push_back(std::move(row));
            }
            if (want_mc) {
                ResultRow row;
                row.backend = "mc";
                if (resolve_error.empty()) {
                    try {
                        fill_row(row, s);
                        const McCell& cell = mc_at(i, j);
                        if (cell.error.empty()) {
                            row.coverage = cell.coverage;
                            row.mc_stderr = cell.stderr_est;
                            row.trials = cell.trials;
                        } else {
                            row.error = cell.error;
                        }
                        row.wall_ms = cell.wall_ms;
                    } catch (const std::exception& e) {
                        row.error = e.what();
                    }
                } else {
                    row.error = resolve_error;
                }
                table.rows.push_back(std::move(row));
            }
        }
    }
    table.total_wall_ms = elapsed_ms(t_total);
    return table;
}

const std::string& csv_header() {
    static const std::string header =
        "backend,gamma_db,delta,lambda_b,n_b,n_u,theta_b_deg,theta_u_deg,"
        "sigma_b_deg,sigma_u_deg,p_tx_dbm,alpha,k_a,beta,fading_m,"
        "fading_omega,noise_w,trials,coverage,mc_stderr,error";
    return header;
}

void emit_csv(const ResultTable& table, const RunSpec& spec,
              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + path);
    }
    out << csv_header() << "\n";
    for (const auto& r : table.rows) {
        out << r.backend << ',' << fmt12(r.gamma_db) << ',' << fmt12(r.delta)
            << ',' << fmt12(r.lambda_b) << ',' << fmt12(r.n_b) << ','
            << fmt12(r.n_u) << ',' << fmt12(r.theta_b_deg) << ','
            << fmt12(r.theta_u_deg) << ',' << fmt12(r.sigma_b_deg) << ','
            << fmt12(r.sigma_u_deg) << ',' << fmt12(r.p_tx_dbm) << ','
            << fmt12(r.alpha) << ',' << fmt12(r.k_a) << ',' << fmt12(r.beta)
            << ',' << fmt12(r.fading_m) << ',' << fmt12(r.fading_omega) << ','
            << fmt12(r.noise_w) << ',' << r.trials << ','
            << (r.coverage ? fmt12(*r.coverage) : std::string{}) << ','
            << (r.mc_stderr ? fmt12(*r.mc_stderr) : std::string{}) << ','
            << csv_quote(r.error) << "\n";
    }
    out.close();

    json manifest;
    manifest["git_revision"] = THZCOV_GIT_REVISION;
    manifest["created"] = iso_timestamp();
    manifest["output"] = path;
    manifest["backend"] = backend_name(spec.backend);
    manifest["mode"] = spec.moment_mode == analytic::MomentMode::legacy
                           ? "legacy"
                           : "corrected";
    manifest["fading_avg"] =
        spec.fading_avg == analytic::FadingAverage::quadrature ? "quadrature"
                                                               : "mean_field";
    manifest["paired"] = spec.paired;
    manifest["seed"] = spec.sim.seed;
    manifest["trials"] = spec.sim.n_trials;
    manifest["window_radius"] = spec.sim.window_radius;
    manifest["min_dist"] = spec.sim.min_dist;
    manifest["threads"] = spec.n_threads;
    manifest["base"] = {
        {"p_tx_dbm", units::watts_to_dbm(spec.params.p_tx)},
        {"freq_hz", spec.params.freq},
        {"alpha", spec.params.pathloss_exp},
        {"k_a", spec.params.absorption},
        {"lambda_b", spec.params.bs_density},
        {"beta", spec.params.blockage_rate},
        {"fading_m", spec.params.fading_shape},
        {"fading_omega", spec.params.fading_scale},
        {"noise_w", spec.params.noise_power},
        {"n_b", spec.n_b},
        {"n_u", spec.n_u},
        {"sigma_b_deg", units::rad_to_deg(spec.sigma_b)},
        {"sigma_u_deg", units::rad_to_deg(spec.sigma_u)},
        {"continuous_theta", spec.continuous_theta},
        {"theta_b_deg", units::rad_to_deg(spec.theta_b)},
        {"delta", spec.cluster.delta},
        {"gamma_db", spec.gamma_db},
    };
    manifest["sweeps"] = json::array();
    for (const auto& s : spec.sweeps) {
        manifest["sweeps"].push_back({{"key", s.name}, {"values", s.values}});
    }
    json walls = json::array();
    for (const auto& r : table.rows) {
        walls.push_back({{"backend", r.backend}, {"wall_ms", r.wall_ms}});
    }
    manifest["rows"] = std::move(walls);
    manifest["total_wall_ms"] = table.total_wall_ms;

    std::ofstream mout(path + ".manifest.json", std::ios::binary);
    if (!mout) {
        throw std::runtime_error("cannot write manifest for: " + path);
    }
    mout << manifest.dump(2) << "\n";
}

}  // namespace thzcov::cli
