#pragma once

#include <cvdyn/gravity.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace cvdyn::cli {

// Reproducible numerical experiments over the released-pair scenario.
// Every cell of every table is computed independently from its indices, so
// results are bitwise identical for any thread count.

struct TimeGridSpec {
    double t_max_s = 10.0;
    int samples = 400;
    bool log_spacing = true; // t = 0 first, then t_max/1e4 ... t_max
};

struct R0GridSpec {
    double min_m = 1e-4;
    double max_m = 1e-2;
    int samples = 60; // geometric spacing, endpoints included
};

struct ExperimentConfig {
    gravity::Scenario scenario;
    TimeGridSpec time_grid;
    R0GridSpec r0_grid;
    double sensitivity = 1e-2;  // absolute half-width of the detection band
    double band_center = 0.10;  // log-negativity the band is centered on
    bool frequency_is_angular = true; // false: scenario frequency is in Hz
    int threads = 1;
    std::vector<double> fig2_r0_m = {3e-3, 5e-4, 3.7e-4};
    std::vector<double> fig2_times_s = {0.8, 4.7, 10.0, 25.0, 50.0};
    std::vector<double> fig3_times_s = {13.0, 15.0};
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

// scenario with the frequency convention applied
gravity::Scenario effective_scenario(const ExperimentConfig& c);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// 17-significant-digit CSV with a header row and '\n' line endings
void write_csv(const Table& t, std::ostream& os);
nlohmann::json table_to_json(const Table& t);

std::vector<double> time_grid_s(const TimeGridSpec& g);
std::vector<double> r0_grid_m(const R0GridSpec& g);

// bare coupling against the collapse-noise variant over the time grid
Table run_fig1(const ExperimentConfig& c);
// regulated model at a few r0 against the bare coupling over the time grid
Table run_fig2_top(const ExperimentConfig& c);
// regulated model over the r0 grid at a few fixed times
Table run_fig2_bottom(const ExperimentConfig& c);
// detection-band compatibility over the r0 grid
Table run_fig3(const ExperimentConfig& c);
// full (r0, t) sweep for the configured model
Table run_scan(const ExperimentConfig& c);

// generation verdict plus the crossover diagnostics
nlohmann::json run_criterion(const ExperimentConfig& c);
// echo the normalized config and derived scales; throws on regime violation
nlohmann::json run_validate(const ExperimentConfig& c);

} // namespace cvdyn::cli
