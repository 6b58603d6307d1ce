#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "greedyid/greedy.hpp"
#include "greedyid/lti.hpp"
#include "greedyid/measurement.hpp"

namespace greedyid {

/// Square root of (1/pi) times the trapezoidal quadrature, over the grid's
/// frequency range, of |H1 - H2|^2, each model evaluated at its natural
/// points. Exact for integrands constant over the range.
double h2_grid_error(const StateSpace& m1, const StateSpace& m2, const FrequencyGrid& grid);

/// Baseline scheme: measures `count` log-equidistant grid points (the same
/// snapping rule as the adaptive initial batch) in one pass and builds the
/// compressed real realization. count must be even, >= 2, and fit the grid.
StateSpace run_equidistant(MeasurementOracle& oracle, int count, const GreedyConfig& cfg);

struct ExperimentConfig {
    StateSpace plant;
    GreedyConfig greedy;
    std::vector<double> noise_levels;  // frequency-domain runs only
    std::uint64_t seed{0};
    int equi_count{0};        // 0 means: match the adaptive final count
    int noise_max_points{40};  // measurement cap under noise (no convergence there)
    std::string out_dir;
    bool time_domain{false};
    std::size_t samples{4096};  // trace length K for time-domain runs
    double sample_time{0.0};    // 0 means: derive from the grid maximum

    void validate() const;
};

struct ExperimentSummary {
    int adaptive_points{0};
    int adaptive_order{0};
    bool adaptive_converged{false};
    double adaptive_final_gap{0.0};
    double adaptive_h2{0.0};
    double adaptive_max_grid_err{0.0};
    int equidistant_points{0};
    int equidistant_order{0};
    double equidistant_h2{0.0};
    double equidistant_max_grid_err{0.0};
    double runtime_adaptive_s{0.0};
    double runtime_total_s{0.0};
};

/// Runs the adaptive scheme and the equidistant baseline against cfg.plant
/// and writes bode.csv, convergence.csv, noise_table.csv, chosen_points.csv,
/// model_adaptive.json, model_equidistant.json and summary.json into
/// cfg.out_dir (created if missing). Every CSV is a pure function of the
/// config and seed; summary.json additionally records wall-clock runtimes.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace greedyid
