#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "greedyid/model_io.hpp"
#include "greedyid/plants.hpp"
#include "greedyid/report.hpp"

using namespace greedyid;
namespace fs = std::filesystem;

namespace {

StateSpace gain(double d) {
    StateSpace m;
    m.E = Matrix(0, 0);
    m.A = Matrix(0, 0);
    m.B = Vector(0);
    m.C = RowVector(0);
    m.D = cplx(d, 0.0);
    m.refresh_real_flag();
    return m;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("/tmp") / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("the response distance of a model to itself is zero") {
    const StateSpace m = make_random_stable(4, 3);
    const FrequencyGrid g = FrequencyGrid::log_spaced(0.1, 100.0, 200);
    CHECK(h2_grid_error(m, m, g) == 0.0);
}

TEST_CASE("a constant response gap integrates exactly") {
    const FrequencyGrid g = FrequencyGrid::log_spaced(0.5, 80.0, 300);
    const double delta = 0.375;
    const double want = delta * std::sqrt((80.0 - 0.5) / M_PI);
    CHECK(h2_grid_error(gain(1.0), gain(1.0 + delta), g) ==
          doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("the quadrature is stable under grid refinement") {
    const StateSpace a = make_random_stable(5, 7);
    const StateSpace b = make_random_stable(3, 11);
    const FrequencyGrid coarse = FrequencyGrid::log_spaced(0.1, 100.0, 500);
    const FrequencyGrid fine = FrequencyGrid::log_spaced(0.1, 100.0, 1000);
    const double ec = h2_grid_error(a, b, coarse);
    const double ef = h2_grid_error(a, b, fine);
    CHECK(std::abs(ec - ef) <= 0.005 * ef);
}

TEST_CASE("the baseline nails a plant given twice its order in measurements") {
    const StateSpace plant = make_random_stable(4, 13);
    ModelOracle oracle(plant);
    GreedyConfig cfg;
    cfg.grid = FrequencyGrid::log_spaced(0.05, 60.0, 300);
    const StateSpace m = run_equidistant(oracle, 8, cfg);
    CHECK(m.order() == 4);
    CHECK(m.real);
    for (double w : cfg.grid.omega) {
        const cplx s(0.0, w);
        CHECK(std::abs(eval_tf(m, s) - eval_tf(plant, s)) < 1e-6);
    }

    // two points cannot carry an order-4 response
    ModelOracle starved(plant);
    const StateSpace poor = run_equidistant(starved, 2, cfg);
    CHECK(h2_grid_error(poor, plant, cfg.grid) > 1e-3);

    CHECK_THROWS_AS(run_equidistant(oracle, 3, cfg), ConfigError);
    CHECK_THROWS_AS(run_equidistant(oracle, 0, cfg), ConfigError);
}

TEST_CASE("experiment settings are validated up front") {
    ExperimentConfig cfg;
    cfg.plant = make_random_stable(3, 17);
    cfg.greedy.grid = FrequencyGrid::log_spaced(0.1, 50.0, 100);
    cfg.out_dir = "/tmp/greedyid_cfg_check";
    cfg.validate();

    ExperimentConfig bad = cfg;
    bad.time_domain = true;
    CHECK_THROWS_AS(bad.validate(), ConfigError);  // continuous plant

    bad.plant = make_random_stable_discrete(3, 17, 0.9 * M_PI / 50.0);
    bad.noise_levels = {1e-5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);  // noise is frequency-domain only
    bad.noise_levels = {};
    bad.validate();

    bad.sample_time = 0.5;  // disagrees with the plant's own sampling
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    ExperimentConfig neg = cfg;
    neg.noise_levels = {-1.0};
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    neg.noise_levels = {};
    neg.equi_count = 3;
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    neg.equi_count = 0;
    neg.out_dir = "";
    CHECK_THROWS_AS(neg.validate(), ConfigError);
}

TEST_CASE("an experiment writes the full report bundle") {
    TempDir dir("greedyid_report_bundle");
    ExperimentConfig cfg;
    cfg.plant = make_random_stable(6, 19);
    cfg.greedy.grid = FrequencyGrid::log_spaced(0.1, 80.0, 150);
    cfg.noise_levels = {1e-5};
    cfg.noise_max_points = 20;
    cfg.seed = 5;
    cfg.out_dir = dir.path.string();

    const ExperimentSummary sum = run_experiment(cfg);
    CHECK(sum.adaptive_converged);
    CHECK(sum.adaptive_order == 6);
    CHECK(sum.adaptive_points >= 6);
    CHECK(sum.equidistant_points == sum.adaptive_points);
    CHECK(sum.adaptive_h2 < 1e-6);
    CHECK(sum.runtime_total_s >= sum.runtime_adaptive_s);

    for (const char* name :
         {"bode.csv", "convergence.csv", "noise_table.csv", "chosen_points.csv",
          "model_adaptive.json", "model_equidistant.json", "summary.json"})
        CHECK(fs::exists(dir.path / name));

    // the CSV headers label their columns
    std::ifstream bode(dir.path / "bode.csv");
    std::string line;
    std::getline(bode, line);
    CHECK(line == "omega, h_true_abs, h_adaptive_abs, h_equidistant_abs, "
                  "err_adaptive, err_equidistant");
    std::size_t rows = 0;
    while (std::getline(bode, line))
        if (!line.empty()) ++rows;
    CHECK(rows == cfg.greedy.grid.size());

    // summary.json parses and echoes the run
    const nlohmann::json j = nlohmann::json::parse(slurp(dir.path / "summary.json"));
    CHECK(j.at("adaptive").at("order").get<int>() == 6);
    CHECK(j.at("adaptive").at("converged").get<bool>());
    CHECK(j.at("adaptive").at("stop").get<std::string>() == "converged");
    CHECK(j.at("equidistant").at("points").get<int>() == sum.adaptive_points);
    CHECK(j.at("config").at("seed").get<std::uint64_t>() == 5);

    // both saved models load back and evaluate
    const StateSpace ma = load_model((dir.path / "model_adaptive.json").string());
    CHECK(ma.order() == 6);
    const StateSpace me = load_model((dir.path / "model_equidistant.json").string());
    CHECK(me.order() >= 1);

    // noise table: header, noiseless row, one row per level
    std::ifstream noise(dir.path / "noise_table.csv");
    std::getline(noise, line);
    CHECK(line == "noise, points, adaptive_h2, equidistant_h2");
    rows = 0;
    while (std::getline(noise, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);

    // convergence.csv has one row per adaptive step
    std::ifstream conv(dir.path / "convergence.csv");
    std::getline(conv, line);
    CHECK(line == "points, adaptive_h2, equidistant_h2");
    rows = 0;
    while (std::getline(conv, line))
        if (!line.empty()) ++rows;
    // one row per convergence check: the initial batch plus one per pair
    const std::size_t steps =
        1 + static_cast<std::size_t>(sum.adaptive_points - cfg.greedy.initial_count) / 2;
    CHECK(rows == steps);

    // chosen_points.csv lists every acquired frequency with its value
    std::ifstream chosen(dir.path / "chosen_points.csv");
    std::getline(chosen, line);
    CHECK(line == "index, omega, h_re, h_im");
    rows = 0;
    while (std::getline(chosen, line))
        if (!line.empty()) ++rows;
    CHECK(rows == static_cast<std::size_t>(sum.adaptive_points));
}

TEST_CASE("reports are a pure function of config and seed") {
    TempDir d1("greedyid_report_det1");
    TempDir d2("greedyid_report_det2");
    ExperimentConfig cfg;
    cfg.plant = make_random_stable(4, 23);
    cfg.greedy.grid = FrequencyGrid::log_spaced(0.2, 40.0, 120);
    cfg.noise_levels = {1e-6, 1e-4};
    cfg.noise_max_points = 16;
    cfg.seed = 77;

    cfg.out_dir = d1.path.string();
    run_experiment(cfg);
    cfg.out_dir = d2.path.string();
    run_experiment(cfg);

    for (const char* name :
         {"bode.csv", "convergence.csv", "noise_table.csv", "chosen_points.csv",
          "model_adaptive.json", "model_equidistant.json"})
        CHECK(slurp(d1.path / name) == slurp(d2.path / name));
}

TEST_CASE("an empty noise list leaves only the noiseless comparison row") {
    TempDir dir("greedyid_report_nonoise");
    ExperimentConfig cfg;
    cfg.plant = make_random_stable(2, 29);
    cfg.greedy.grid = FrequencyGrid::log_spaced(0.1, 30.0, 100);
    cfg.out_dir = dir.path.string();
    run_experiment(cfg);
    std::ifstream noise(dir.path / "noise_table.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(noise, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);  // header + noiseless
}

TEST_CASE("time-domain experiments run against a sampled plant") {
    TempDir dir("greedyid_report_time");
    ExperimentConfig cfg;
    cfg.greedy.grid = FrequencyGrid::log_spaced(0.1, 100.0, 150);
    const double ts = 0.9 * M_PI / 100.0;
    cfg.plant = make_random_stable_discrete(3, 31, ts);
    cfg.time_domain = true;
    cfg.out_dir = dir.path.string();

    const ExperimentSummary sum = run_experiment(cfg);
    CHECK(sum.adaptive_converged);
    CHECK(sum.adaptive_order == 3);
    CHECK(sum.adaptive_h2 < 1e-4);
    const StateSpace ma = load_model((dir.path / "model_adaptive.json").string());
    CHECK(ma.domain == Domain::discrete);
    CHECK(ma.sample_time == ts);
}
