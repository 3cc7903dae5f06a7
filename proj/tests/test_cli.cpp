// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the thzcov authors

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "thzcov/runspec.hpp"
#include "thzcov/sweep.hpp"
#include "thzcov/units.hpp"

using namespace thzcov;
using namespace thzcov::cli;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() / stem;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int error_line(const std::string& text) {
    try {
        parse_runspec(text);
    } catch (const RunSpecError& e) {
        return e.line;
    }
    return -1;
}

}  // namespace

TEST_CASE("empty config resolves to the baseline deployment") {
    const RunSpec spec = parse_runspec("");
    CHECK(spec.params.p_tx == 1.0);
    CHECK(spec.params.freq == 1e12);
    CHECK(spec.params.pathloss_exp == 2.5);
    CHECK(spec.params.absorption == 0.06);
    CHECK(spec.params.bs_density == 0.005);
    CHECK(spec.params.blockage_rate == doctest::Approx(1.0 / 141.4));
    CHECK(spec.params.fading_shape == 1.0);
    CHECK(spec.params.fading_scale == 1.0);
    CHECK(spec.params.noise_power == 0.0);
    CHECK(spec.n_b == 8);
    CHECK(spec.n_u == 8);
    CHECK(spec.sigma_b == doctest::Approx(units::deg_to_rad(10.0)));
    CHECK(spec.sigma_u == doctest::Approx(units::deg_to_rad(10.0)));
    CHECK_FALSE(spec.continuous_theta);
    CHECK(spec.cluster.delta == 0.6);
    CHECK(spec.gamma_db == 0.0);
    CHECK(spec.backend == Backend::both);
    CHECK(spec.moment_mode == analytic::MomentMode::campbell);
    CHECK(spec.fading_avg == analytic::FadingAverage::quadrature);
    CHECK_FALSE(spec.paired);
    CHECK(spec.sim.window_radius == 1000.0);
    CHECK(spec.sim.min_dist == 0.1);
    CHECK(spec.sweeps.empty());
}

TEST_CASE("key value assignments with boundary unit conversion") {
    const RunSpec spec = parse_runspec(
        "gamma_db = 5\n"
        "delta = 0.4\n"
        "n_b = 16\n"
        "sigma_b_deg = 5\n"
        "theta_b_deg = 12\n"
        "trials = 777\n"
        "seed = 9\n"
        "backend = mc\n"
        "mode = legacy\n"
        "fading_avg = mean_field\n"
        "paired = true\n"
        "threads = 2\n"
        "output = x.csv\n"
        "noise_dbm = -90\n"
        "p_tx_dbm = 20\n");
    CHECK(spec.gamma_db == 5.0);
    CHECK(spec.cluster.delta == 0.4);
    CHECK(spec.n_b == 16);
    CHECK(spec.sigma_b == doctest::Approx(units::deg_to_rad(5.0)));
    CHECK(spec.continuous_theta);
    CHECK(spec.theta_b == doctest::Approx(units::deg_to_rad(12.0)));
    CHECK(spec.sim.n_trials == 777);
    CHECK(spec.sim.seed == 9);
    CHECK(spec.backend == Backend::mc);
    CHECK(spec.moment_mode == analytic::MomentMode::legacy);
    CHECK(spec.fading_avg == analytic::FadingAverage::mean_field);
    CHECK(spec.paired);
    CHECK(spec.n_threads == 2);
    CHECK(spec.output_path == "x.csv");
    CHECK(spec.params.noise_power == doctest::Approx(1e-12));
    CHECK(spec.params.p_tx == doctest::Approx(0.1));
}

TEST_CASE("comments and blank lines are ignored") {
    const RunSpec spec = parse_runspec(
        "# full-line comment\n"
        "\n"
        "   gamma_db = 3   # trailing comment\n");
    CHECK(spec.gamma_db == 3.0);
}

TEST_CASE("parse errors carry the offending line") {
    CHECK(error_line("gamma_db = abc\n") == 1);
    CHECK(error_line("\nbogus_key = 1\n") == 2);
    CHECK(error_line("gamma_db\n") == 1);
    CHECK(error_line("sweep gamma_db = 0:10:2\n"
                     "sweep gamma_db = 1,2\n") == 2);
    CHECK(error_line("sweep gamma_db = 0:10:2\n"
                     "sweep delta = 1,0.6\n"
                     "sweep n_b = 8,16\n") == 3);
    CHECK(error_line("sweep gamma_db = 10:0:2\n") == 1);
    CHECK(error_line("sweep gamma_db = 0:10:-1\n") == 1);
    CHECK(error_line("sweep gamma_db = 1,,2\n") == 1);
    CHECK(error_line("sweep nonsense = 1,2\n") == 1);
    CHECK(error_line("trials = 0\n") == 1);
    // violations only visible on the resolved spec report line 0
    CHECK(error_line("delta = 1.5\n") == 0);
}

TEST_CASE("sweep grids expand as written") {
    const RunSpec ranged = parse_runspec("sweep gamma_db = -10:40:2\n");
    REQUIRE(ranged.sweeps.size() == 1);
    CHECK(ranged.sweeps[0].name == "gamma_db");
    CHECK(ranged.sweeps[0].values.size() == 26);
    CHECK(ranged.sweeps[0].values.front() == doctest::Approx(-10.0));
    CHECK(ranged.sweeps[0].values.back() == doctest::Approx(40.0));

    const RunSpec listed = parse_runspec("sweep delta = 1, 0.6, 0.4, 0.2\n");
    REQUIRE(listed.sweeps.size() == 1);
    CHECK(listed.sweeps[0].values == std::vector<double>{1.0, 0.6, 0.4, 0.2});
}

TEST_CASE("sweepable keys cover the documented set") {
    const auto& keys = sweepable_keys();
    for (const std::string k :
         {"gamma_db", "delta", "sigma_b_deg", "sigma_u_deg", "n_b", "n_u",
          "lambda_b", "theta_b_deg"}) {
        CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
    }
    CHECK(keys.size() == 8);

    RunSpec spec = parse_runspec("");
    apply_sweep_value(spec, "delta", 0.5);
    CHECK(spec.cluster.delta == 0.5);
    apply_sweep_value(spec, "sigma_b_deg", 5.0);
    CHECK(spec.sigma_b == doctest::Approx(units::deg_to_rad(5.0)));
    apply_sweep_value(spec, "lambda_b", 0.01);
    CHECK(spec.params.bs_density == 0.01);
    CHECK_THROWS_AS(apply_sweep_value(spec, "nonsense", 1.0),
                    std::invalid_argument);
}

TEST_CASE("presets carry the four figure families") {
    CHECK(preset_names().size() == 4);
    CHECK_THROWS_AS(preset("fig9"), RunSpecError);

    const RunSpec f1 = preset("fig1");
    REQUIRE(f1.sweeps.size() == 2);
    CHECK(f1.sweeps[0].name == "gamma_db");
    CHECK(f1.sweeps[0].values.size() == 13);
    CHECK(f1.sweeps[1].name == "delta");
    CHECK(f1.sweeps[1].values == std::vector<double>{1.0, 0.6, 0.4, 0.2});

    const RunSpec f2 = preset("fig2");
    REQUIRE(f2.sweeps.size() == 2);
    CHECK(f2.sweeps[0].name == "theta_b_deg");
    CHECK(f2.sweeps[0].values.size() == 20);
    CHECK(f2.sweeps[1].values == std::vector<double>{0.0, 10.0, 20.0});
    CHECK(f2.cluster.delta == 0.6);
    CHECK(f2.gamma_db == 15.0);
    CHECK(f2.params.noise_power ==
          doctest::Approx(units::dbm_to_watts(-88.0)));

    const RunSpec f3 = preset("fig3");
    CHECK(f3.params.noise_power == 0.0);
    CHECK(f3.sweeps[0].name == "sigma_b_deg");
    CHECK(f3.sweeps[0].values.size() == 10);

    const RunSpec f4 = preset("fig4");
    CHECK(f4.sweeps[0].name == "lambda_b");
    CHECK(f4.sweeps[0].values.size() == 6);
    CHECK(f4.sweeps[1].values == std::vector<double>{8.0, 16.0});
    CHECK(f4.sigma_b == doctest::Approx(units::deg_to_rad(5.0)));
    CHECK(f4.sigma_u == doctest::Approx(units::deg_to_rad(5.0)));
    CHECK(f4.gamma_db == 15.0);
    CHECK(f4.params.noise_power ==
          doctest::Approx(units::dbm_to_watts(-88.0)));
}

TEST_CASE("sweep evaluation and csv emission") {
    RunSpec spec = parse_runspec(
        "sweep gamma_db = 0, 5\n"
        "trials = 400\n"
        "seed = 5\n");
    const ResultTable table = run_sweep(spec);
    REQUIRE(table.rows.size() == 4);

    // deterministic row order: per point, analytic before mc
    CHECK(table.rows[0].backend == "analytic");
    CHECK(table.rows[0].gamma_db == 0.0);
    CHECK(table.rows[1].backend == "mc");
    CHECK(table.rows[1].gamma_db == 0.0);
    CHECK(table.rows[2].backend == "analytic");
    CHECK(table.rows[2].gamma_db == 5.0);
    CHECK(table.rows[3].backend == "mc");
    CHECK(table.rows[3].gamma_db == 5.0);

    for (const auto& row : table.rows) {
        REQUIRE(row.error.empty());
        REQUIRE(row.coverage.has_value());
        CHECK(*row.coverage >= 0.0);
        CHECK(*row.coverage <= 1.0);
        CHECK(row.delta == 0.6);
        CHECK(row.n_b == 8.0);
        CHECK(row.sigma_b_deg == doctest::Approx(10.0));
        CHECK(row.p_tx_dbm == doctest::Approx(30.0));
        if (row.backend == "mc") {
            CHECK(row.trials == 400);
            CHECK(row.mc_stderr.has_value());
        } else {
            CHECK(row.trials == 0);
            CHECK_FALSE(row.mc_stderr.has_value());
        }
    }
    // one shared trial pass scores both thresholds: same seed, gamma = 0
    // dominates gamma = 5
    CHECK(*table.rows[1].coverage >= *table.rows[3].coverage);

    const auto csv_path = temp_file("thzcov_test_sweep.csv");
    emit_csv(table, spec, csv_path.string());
    const std::string first = slurp(csv_path);
    emit_csv(table, spec, csv_path.string());
    CHECK(slurp(csv_path) == first);

    std::istringstream lines(first);
    std::string header;
    std::getline(lines, header);
    CHECK(header == csv_header());
    CHECK(std::count(header.begin(), header.end(), ',') == 20);
    std::string line;
    int data_lines = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++data_lines;
    }
    CHECK(data_lines == 4);

    // 12 significant digits survive the round trip
    const std::string body = first.substr(first.find('\n') + 1);
    std::istringstream row_ss(body);
    std::string cell;
    for (int i = 0; i <= 18; ++i) std::getline(row_ss, cell, ',');
    const double reparsed = std::stod(cell);
    CHECK(std::abs(reparsed - *table.rows[0].coverage) <=
          1e-11 * std::max(1.0, std::abs(*table.rows[0].coverage)));

    const auto manifest_path = csv_path.string() + ".manifest.json";
    const auto manifest = nlohmann::json::parse(slurp(manifest_path));
    CHECK(manifest.contains("git_revision"));
    CHECK(manifest.contains("created"));
    CHECK(manifest["seed"] == 5);
    CHECK(manifest["trials"] == 400);
    CHECK(manifest["backend"] == "both");
    CHECK(manifest["base"]["delta"] == 0.6);
    CHECK(manifest["sweeps"].size() == 1);
    CHECK(manifest["sweeps"][0]["key"] == "gamma_db");
    CHECK(manifest["rows"].size() == 4);
    CHECK(manifest["total_wall_ms"].get<double>() > 0.0);

    std::filesystem::remove(csv_path);
    std::filesystem::remove(manifest_path);
}

TEST_CASE("failing grid points are captured per row") {
    RunSpec spec = parse_runspec(
        "sweep n_b = 8, 1\n"
        "backend = both\n"
        "trials = 50\n");
    const ResultTable table = run_sweep(spec);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.rows[0].error.empty());
    CHECK(table.rows[1].error.empty());
    CHECK_FALSE(table.rows[2].error.empty());
    CHECK_FALSE(table.rows[3].error.empty());
    CHECK_FALSE(table.rows[2].coverage.has_value());
    CHECK_FALSE(table.rows[3].coverage.has_value());

    const auto csv_path = temp_file("thzcov_test_errors.csv");
    emit_csv(table, spec, csv_path.string());
    const std::string text = slurp(csv_path);
    CHECK(text.find("exceed 1.5") != std::string::npos);
    std::filesystem::remove(csv_path);
    std::filesystem::remove(csv_path.string() + ".manifest.json");
}

TEST_CASE("paired sweeps reuse one random stream per threshold point") {
    RunSpec spec = parse_runspec(
        "sweep delta = 1.0, 0.2\n"
        "backend = mc\n"
        "paired = true\n"
        "trials = 300\n"
        "lambda_b = 1e-5\n"
        "gamma_db = -40\n");
    const ResultTable paired_run = run_sweep(spec);
    REQUIRE(paired_run.rows.size() == 2);
    // at a vanishing threshold coverage counts exactly the nonvoid windows;
    // common random numbers give both points the same realizations, so the
    // estimates agree bit for bit (the density makes voids frequent)
    CHECK(*paired_run.rows[0].coverage < 1.0);
    CHECK(*paired_run.rows[0].coverage == *paired_run.rows[1].coverage);
}
