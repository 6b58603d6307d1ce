#include "greedyid/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "greedyid/kernels.hpp"
#include "greedyid/model_io.hpp"
#include "greedyid/time_domain.hpp"

namespace greedyid {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<cplx> natural_sweep(const StateSpace& m, const FrequencyGrid& grid) {
    std::vector<cplx> pts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = eval_point(m, grid.omega[i]);
    const TfEvaluator ev(m);
    return kernels::frequency_response(ev, pts);
}

double max_abs_gap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double g = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
    return g;
}

double h2_from_sweeps(const std::vector<cplx>& r1, const std::vector<cplx>& r2,
                      const FrequencyGrid& grid) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double fa = std::norm(r1[i] - r2[i]);
        const double fb = std::norm(r1[i + 1] - r2[i + 1]);
        acc += 0.5 * (fa + fb) * (grid.omega[i + 1] - grid.omega[i]);
    }
    return std::sqrt(acc / M_PI);
}

const char* stop_name(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::max_points: return "max_points";
        case StopReason::degenerate_objective: return "degenerate_objective";
        case StopReason::grid_exhausted: return "grid_exhausted";
    }
    return "unknown";
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << std::setprecision(17);
    return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double h2_grid_error(const StateSpace& m1, const StateSpace& m2, const FrequencyGrid& grid) {
    grid.validate();
    return h2_from_sweeps(natural_sweep(m1, grid), natural_sweep(m2, grid), grid);
}

StateSpace run_equidistant(MeasurementOracle& oracle, int count, const GreedyConfig& cfg) {
    cfg.grid.validate();
    if (count < 2 || count % 2 != 0)
        throw ConfigError("run_equidistant: count must be even and at least 2");
    std::vector<double> freq;
    std::vector<cplx> pts;
    std::vector<cplx> vals;
    for (std::size_t g : initial_points(cfg.grid, count)) {
        const cplx s(0.0, cfg.grid.omega[g]);
        vals.push_back(oracle.measure(s));
        pts.push_back(s);
        freq.push_back(cfg.grid.omega[g]);
    }
    const MeasurementSet ms = paired_split(pts, vals, freq);
    const LoewnerPencil pencil = build_pencil(ms, cplx(cfg.feedthrough, 0.0));
    return compress_realize(realify_pencil(pencil), cfg.rank_tol);
}

void ExperimentConfig::validate() const {
    greedy.validate();
    plant.validate();
    if (equi_count != 0 && (equi_count < 2 || equi_count % 2 != 0))
        throw ConfigError("experiment: equi_count must be 0 or an even count >= 2");
    if (equi_count > static_cast<int>(greedy.grid.size()))
        throw ConfigError("experiment: equi_count exceeds the grid");
    for (double lvl : noise_levels)
        if (!(lvl >= 0.0)) throw ConfigError("experiment: noise levels must be >= 0");
    if (noise_max_points < greedy.initial_count)
        throw ConfigError("experiment: noise_max_points is below the initial batch");
    if (out_dir.empty()) throw ConfigError("experiment: output directory required");
    if (time_domain) {
        if (!noise_levels.empty())
            throw ConfigError("experiment: the noise sweep is frequency-domain only");
        if (plant.domain != Domain::discrete)
            throw ConfigError("experiment: time-domain runs need a discrete plant");
        if (samples < 16 || samples % 2 != 0)
            throw ConfigError("experiment: samples must be even and at least 16");
        if (sample_time < 0.0) throw ConfigError("experiment: sample_time must be >= 0");
        if (sample_time > 0.0 && sample_time != plant.sample_time)
            throw ConfigError("experiment: sample_time must match the plant's");
    }
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    const FrequencyGrid& grid = cfg.greedy.grid;
    const double ts = cfg.time_domain
                          ? (cfg.sample_time > 0.0 ? cfg.sample_time : cfg.plant.sample_time)
                          : 0.0;
    const auto t_total = std::chrono::steady_clock::now();

    const auto t_adaptive = std::chrono::steady_clock::now();
    GreedyResult adaptive;
    if (cfg.time_domain) {
        ModelSimulator sim(cfg.plant);
        adaptive = greedy_time_loop(sim, cfg.greedy, ts, cfg.samples);
    } else {
        ModelOracle oracle(cfg.plant, 0.0, cfg.seed);
        adaptive = greedy_loop(oracle, cfg.greedy);
    }
    const double dt_adaptive = seconds_since(t_adaptive);

    auto equi_at = [&](int count, double noise, std::uint64_t seed) {
        if (cfg.time_domain) {
            ModelSimulator sim(cfg.plant);
            return equidistant_time(sim, count, cfg.greedy, ts, cfg.samples);
        }
        ModelOracle oracle(cfg.plant, noise, seed);
        return run_equidistant(oracle, count, cfg.greedy);
    };

    const int n_adaptive = adaptive.history.measurement_count;
    const int n_equi = cfg.equi_count > 0 ? cfg.equi_count : n_adaptive;
    const StateSpace equi = equi_at(n_equi, 0.0, cfg.seed);

    const std::vector<cplx> r_true = natural_sweep(cfg.plant, grid);
    const std::vector<cplx> r_adaptive = natural_sweep(adaptive.model, grid);
    const std::vector<cplx> r_equi = natural_sweep(equi, grid);

    {
        std::ofstream f = open_out(out / "bode.csv");
        f << "omega, h_true_abs, h_adaptive_abs, h_equidistant_abs, err_adaptive, "
             "err_equidistant\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            f << grid.omega[i] << ", " << std::abs(r_true[i]) << ", " << std::abs(r_adaptive[i])
              << ", " << std::abs(r_equi[i]) << ", " << std::abs(r_adaptive[i] - r_true[i])
              << ", " << std::abs(r_equi[i] - r_true[i]) << "\n";
    }

    ExperimentSummary summary;
    summary.adaptive_points = n_adaptive;
    summary.adaptive_order = static_cast<int>(adaptive.model.order());
    summary.adaptive_converged = adaptive.history.converged;
    summary.adaptive_final_gap = adaptive.history.final_err;
    summary.adaptive_h2 = h2_from_sweeps(r_adaptive, r_true, grid);
    summary.adaptive_max_grid_err = max_abs_gap(r_adaptive, r_true);
    summary.equidistant_points = n_equi;
    summary.equidistant_order = static_cast<int>(equi.order());
    summary.equidistant_h2 = h2_from_sweeps(r_equi, r_true, grid);
    summary.equidistant_max_grid_err = max_abs_gap(r_equi, r_true);

    {
        std::ofstream f = open_out(out / "convergence.csv");
        f << "points, adaptive_h2, equidistant_h2\n";
        for (const GreedyStep& step : adaptive.history.steps) {
            const double ah = h2_from_sweeps(natural_sweep(step.model, grid), r_true, grid);
            const StateSpace em = equi_at(step.total_points, 0.0, cfg.seed);
            f << step.total_points << ", " << ah << ", "
              << h2_from_sweeps(natural_sweep(em, grid), r_true, grid) << "\n";
        }
    }

    {
        std::ofstream f = open_out(out / "noise_table.csv");
        f << "noise, points, adaptive_h2, equidistant_h2\n";
        f << 0.0 << ", " << n_adaptive << ", " << summary.adaptive_h2 << ", "
          << summary.equidistant_h2 << "\n";
        GreedyConfig noisy_cfg = cfg.greedy;
        noisy_cfg.max_points = cfg.noise_max_points;
        for (std::size_t i = 0; i < cfg.noise_levels.size(); ++i) {
            const double lvl = cfg.noise_levels[i];
            ModelOracle oracle(cfg.plant, lvl, cfg.seed + 2 * i + 1);
            const GreedyResult run = greedy_loop(oracle, noisy_cfg);
            const int pts = run.history.measurement_count;
            const StateSpace em = equi_at(pts, lvl, cfg.seed + 2 * i + 2);
            f << lvl << ", " << pts << ", "
              << h2_from_sweeps(natural_sweep(run.model, grid), r_true, grid) << ", "
              << h2_from_sweeps(natural_sweep(em, grid), r_true, grid) << "\n";
        }
    }

    {
        std::ofstream f = open_out(out / "chosen_points.csv");
        f << "index, omega, h_re, h_im\n";
        const GreedyHistory& h = adaptive.history;
        for (std::size_t i = 0; i < h.point_omega.size(); ++i)
            f << i << ", " << h.point_omega[i] << ", " << h.point_value[i].real() << ", "
              << h.point_value[i].imag() << "\n";
    }

    save_model((out / "model_adaptive.json").string(), adaptive.model);
    save_model((out / "model_equidistant.json").string(), equi);

    summary.runtime_adaptive_s = dt_adaptive;
    summary.runtime_total_s = seconds_since(t_total);

    {
        json doc;
        doc["adaptive"] = {{"points", summary.adaptive_points},
                           {"order", summary.adaptive_order},
                           {"converged", summary.adaptive_converged},
                           {"stop", stop_name(adaptive.history.stop)},
                           {"final_gap", summary.adaptive_final_gap},
                           {"h2", summary.adaptive_h2},
                           {"max_grid_err", summary.adaptive_max_grid_err},
                           {"runtime_s", summary.runtime_adaptive_s}};
        doc["equidistant"] = {{"points", summary.equidistant_points},
                              {"order", summary.equidistant_order},
                              {"h2", summary.equidistant_h2},
                              {"max_grid_err", summary.equidistant_max_grid_err}};
        doc["config"] = {{"wmin", grid.omega.front()},
                         {"wmax", grid.omega.back()},
                         {"grid", grid.size()},
                         {"beta", cfg.greedy.beta},
                         {"epsilon", cfg.greedy.epsilon},
                         {"tol", cfg.greedy.tol},
                         {"initial_count", cfg.greedy.initial_count},
                         {"max_points", cfg.greedy.max_points},
                         {"seed", cfg.seed},
                         {"equi_count", cfg.equi_count},
                         {"noise_levels", cfg.noise_levels},
                         {"domain", cfg.time_domain ? "time" : "freq"},
                         {"samples", cfg.samples},
                         {"sample_time", ts}};
        doc["runtime_total_s"] = summary.runtime_total_s;
        std::ofstream f = open_out(out / "summary.json");
        f << doc.dump(1) << "\n";
    }
    return summary;
}

}  // namespace greedyid
