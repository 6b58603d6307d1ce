#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "greedyid/greedy.hpp"
#include "greedyid/plants.hpp"

using namespace greedyid;

namespace {

// Exact-response oracle that counts its calls.
class ExactOracle : public MeasurementOracle {
  public:
    explicit ExactOracle(const StateSpace& plant) : ev_(plant) {}
    cplx measure(cplx sigma) override {
        ++calls;
        returned.push_back(ev_(sigma));
        return returned.back();
    }
    int calls = 0;
    std::vector<cplx> returned;

  private:
    TfEvaluator ev_;
};

GreedyConfig small_config(double wmin, double wmax, std::size_t m) {
    GreedyConfig cfg;
    cfg.grid = FrequencyGrid::log_spaced(wmin, wmax, m);
    return cfg;
}

}  // namespace

TEST_CASE("notch weight vanishes exactly on its anchor and stays below one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logu(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double w = std::pow(10.0, logu(rng));
        const double a = std::pow(10.0, logu(rng));
        CHECK(mask_single(cplx(0.0, w), cplx(0.0, w), 0.6, 1e-15) == 0.0);
        const double v = mask_single(cplx(0.0, w), cplx(0.0, a), 0.6, 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);  // < 1 in exact arithmetic; rounds to 1 far away
    }
    // only the magnitude matters, not the phase of the point
    CHECK(mask_single(cplx(3.0, 4.0), cplx(0.0, 5.0), 0.6, 1e-15) == 0.0);
}

TEST_CASE("notch weight matches hand-frozen values") {
    CHECK(mask_single(cplx(0.0, 10.0), cplx(0.0, 0.1), 0.6, 1e-15) ==
          doctest::Approx(0.9999970228838626).epsilon(1e-12));
    CHECK(mask_single(cplx(0.0, 2.0), cplx(0.0, 1.0), 0.6, 1e-15) ==
          doctest::Approx(0.25044217152932713).epsilon(1e-12));
    // beta -> 0 masks everything, large beta masks almost nothing
    CHECK(mask_single(cplx(0.0, 10.0), cplx(0.0, 0.1), 1e-300, 1e-15) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mask_single(cplx(0.0, 10.0), cplx(0.0, 0.1), 1e3, 1e-15) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // epsilon keeps a zero-frequency argument finite
    CHECK(std::isfinite(mask_single(cplx(0.0, 0.0), cplx(0.0, 1.0), 0.6, 1e-15)));
}

TEST_CASE("anchor products multiply and an empty anchor set is neutral") {
    const cplx s(0.0, 3.0);
    const std::vector<cplx> anchors = {cplx(0.0, 1.0), cplx(0.0, 7.0), cplx(0.0, 20.0)};
    CHECK(mask_product(s, {}, 0.6, 1e-15) == 1.0);
    double want = 1.0;
    for (const cplx& a : anchors) want *= mask_single(s, a, 0.6, 1e-15);
    CHECK(mask_product(s, anchors, 0.6, 1e-15) == doctest::Approx(want).epsilon(1e-15));
    for (const cplx& a : anchors) CHECK(mask_product(a, anchors, 0.6, 1e-15) == 0.0);
}

TEST_CASE("initial batch snaps log-equidistant targets onto the grid") {
    FrequencyGrid g;
    g.omega = {1.0, 2.0, 5.0, 10.0};

    CHECK(initial_points(g, 4) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(initial_points(g, 2) == std::vector<std::size_t>{0, 3});
    // middle target sqrt(10) = 3.16 is nearer to 2 than to 5
    CHECK(initial_points(g, 3) == std::vector<std::size_t>{0, 1, 3});

    // a taken nearest point advances to the next nearest unused one
    FrequencyGrid tight;
    tight.omega = {1.0, 9.0, 10.0};
    CHECK(initial_points(tight, 3) == std::vector<std::size_t>{0, 1, 2});

    CHECK_THROWS_AS(initial_points(g, 5), GridTooSmall);
    CHECK_THROWS_AS(initial_points(g, 0), ConfigError);
}

TEST_CASE("point selection equals an exhaustive masked argmax") {
    const GreedyConfig cfg = small_config(0.1, 100.0, 120);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> pick(0, 119);
    for (int trial = 0; trial < 25; ++trial) {
        const StateSpace hk = make_random_stable(5, 1000 + trial);
        const StateSpace hkm1 = make_random_stable(4, 2000 + trial);
        std::vector<cplx> anchors = {cplx(0.0, cfg.grid.omega[pick(rng)]),
                                     cplx(0.0, cfg.grid.omega[pick(rng)])};
        std::vector<cplx> exclude;
        for (int e = 0; e < 10; ++e) exclude.push_back(cplx(0.0, cfg.grid.omega[pick(rng)]));

        const cplx got = select_point(hk, hkm1, anchors, cfg, exclude);

        double best = -1.0;
        cplx want;
        for (double w : cfg.grid.omega) {
            const cplx s(0.0, w);
            bool skip = false;
            for (const cplx& e : exclude)
                if (std::abs(e - s) <= 1e-12 * (1.0 + std::abs(s))) skip = true;
            if (skip) continue;
            const double obj = mask_product(s, anchors, cfg.beta, cfg.epsilon) *
                               std::abs(eval_tf(hk, s) - eval_tf(hkm1, s));
            if (obj > best) {  // strict: ties stay at the lowest frequency
                best = obj;
                want = s;
            }
        }
        CHECK(got == want);
    }
}

TEST_CASE("point selection reports exhausted grids and vanishing objectives") {
    const GreedyConfig cfg = small_config(0.1, 10.0, 12);
    const StateSpace hk = make_random_stable(3, 5);
    const StateSpace hkm1 = make_random_stable(2, 6);
    std::vector<cplx> all;
    for (double w : cfg.grid.omega) all.push_back(cplx(0.0, w));
    CHECK_THROWS_AS(select_point(hk, hkm1, {}, cfg, all), GridExhausted);
    CHECK_THROWS_AS(select_point(hk, hk, {}, cfg, {}), DegenerateObjective);
}

TEST_CASE("settings are validated before any measurement is spent") {
    GreedyConfig cfg = small_config(0.1, 10.0, 50);
    cfg.initial_count = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.initial_count = 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.initial_count = 6;
    cfg.max_points = 4;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.max_points = 200;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.tol = 1e-8;
    cfg.beta = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.beta = 0.6;
    cfg.grid = FrequencyGrid::log_spaced(0.1, 10.0, 4);
    CHECK_THROWS_AS(cfg.validate(), GridTooSmall);
}

TEST_CASE("a low-order plant converges on the initial batch alone") {
    const StateSpace plant = make_random_stable(2, 21);
    ExactOracle oracle(plant);
    const GreedyConfig cfg = small_config(0.05, 50.0, 200);
    const GreedyResult res = greedy_loop(oracle, cfg);

    CHECK(res.history.converged);
    CHECK(res.history.stop == StopReason::converged);
    CHECK(res.history.measurement_count == 6);
    CHECK(oracle.calls == 6);
    CHECK(res.history.steps.size() == 1);
    CHECK(res.history.steps[0].sigma_a == 0.0);
    CHECK(res.model.order() == 2);
    CHECK(res.model.real);
    for (double w : cfg.grid.omega) {
        const cplx s(0.0, w);
        CHECK(std::abs(eval_tf(res.model, s) - eval_tf(plant, s)) < 1e-6);
    }
}

TEST_CASE("iterating runs keep the two-per-step measurement budget") {
    const StateSpace plant = make_random_stable(10, 29);
    ExactOracle oracle(plant);
    const GreedyConfig cfg = small_config(0.05, 80.0, 300);
    const GreedyResult res = greedy_loop(oracle, cfg);
    const GreedyHistory& h = res.history;

    REQUIRE(h.steps.size() >= 2);  // order 10 cannot be captured by 6 points
    CHECK(h.measurement_count ==
          cfg.initial_count + 2 * static_cast<int>(h.steps.size() - 1));
    CHECK(oracle.calls == h.measurement_count);
    CHECK(h.point_omega.size() == static_cast<std::size_t>(h.measurement_count));
    CHECK(h.point_value.size() == h.point_omega.size());
    CHECK(h.converged);
    CHECK(h.final_err <= cfg.tol);
    CHECK(h.final_err == h.steps.back().err);
}

TEST_CASE("history records nested cumulative point sets in acquisition order") {
    const StateSpace plant = make_random_stable(8, 31);
    ExactOracle oracle(plant);
    const GreedyConfig cfg = small_config(0.1, 60.0, 250);
    const GreedyHistory h = greedy_loop(oracle, cfg).history;

    REQUIRE(!h.steps.empty());
    CHECK(h.initial.size() == static_cast<std::size_t>(cfg.initial_count));
    for (std::size_t i = 1; i < h.initial.size(); ++i) CHECK(h.initial[i] > h.initial[i - 1]);

    for (std::size_t k = 0; k < h.steps.size(); ++k) {
        const GreedyStep& st = h.steps[k];
        CHECK(st.total_points ==
              cfg.initial_count + 2 * static_cast<int>(k));
        REQUIRE(st.cumulative.size() == static_cast<std::size_t>(st.total_points));
        if (k > 0) {
            const GreedyStep& prev = h.steps[k - 1];
            for (std::size_t i = 0; i < prev.cumulative.size(); ++i)
                CHECK(st.cumulative[i] == prev.cumulative[i]);
            // the two fresh points sit at the tail, in selection order
            CHECK(st.cumulative[st.cumulative.size() - 2] == st.sigma_a);
            CHECK(st.cumulative[st.cumulative.size() - 1] == st.sigma_b);
            CHECK(st.sigma_a != st.sigma_b);
        }
    }
    CHECK(h.steps.back().cumulative == h.point_omega);

    // measured values are stored verbatim, in oracle call order
    REQUIRE(h.point_value.size() == oracle.returned.size());
    for (std::size_t i = 0; i < h.point_value.size(); ++i)
        CHECK(h.point_value[i] == oracle.returned[i]);
}

TEST_CASE("every acquired frequency is distinct and lives on the grid") {
    const StateSpace plant = make_random_stable(9, 35);
    ExactOracle oracle(plant);
    const GreedyConfig cfg = small_config(0.1, 90.0, 180);
    const GreedyHistory h = greedy_loop(oracle, cfg).history;

    std::vector<double> sorted = h.point_omega;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (double w : h.point_omega) {
        const bool on_grid =
            std::find(cfg.grid.omega.begin(), cfg.grid.omega.end(), w) != cfg.grid.omega.end();
        CHECK(on_grid);
    }
}

TEST_CASE("the point cap stops the loop without overshooting") {
    const StateSpace plant = make_random_stable(12, 41);
    ExactOracle oracle(plant);
    GreedyConfig cfg = small_config(0.05, 100.0, 300);
    cfg.max_points = 10;
    cfg.tol = 1e-14;  // unreachable with 10 points of an order-12 plant
    const GreedyResult res = greedy_loop(oracle, cfg);
    CHECK(res.history.stop == StopReason::max_points);
    CHECK_FALSE(res.history.converged);
    CHECK(res.history.measurement_count == 10);
    CHECK(oracle.calls == 10);
}
