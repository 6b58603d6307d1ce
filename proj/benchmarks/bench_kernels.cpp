// Times the OpenMP kernels against their serial reference twins. Sizes are
// chosen so each cell runs long enough to time meaningfully; --quick shrinks
// everything to a smoke run for CI.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "greedyid/kernels.hpp"
#include "greedyid/plants.hpp"

using namespace greedyid;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        if (dt < best) best = dt;
    }
    return best;
}

void row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-24s %10.4f ms %10.4f ms %8.2fx\n", name, serial_s * 1e3, parallel_s * 1e3,
                serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const int reps = quick ? 1 : 5;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const StateSpace plant = make_penzl();
        const TfEvaluator ev(plant);
        const FrequencyGrid grid = FrequencyGrid::log_spaced(0.1, 1000.0, quick ? 50 : 500);
        std::vector<cplx> pts(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = grid.point(i);
        std::vector<cplx> a, b;
        const double ts = time_best_of(reps, [&] { a = kernels::serial::frequency_response(ev, pts); });
        const double tp = time_best_of(reps, [&] { b = kernels::frequency_response(ev, pts); });
        if (a != b) {
            std::fprintf(stderr, "frequency_response: serial and parallel results differ\n");
            return 1;
        }
        row("frequency_response", ts, tp);
    }

    {
        const Eigen::Index n = quick ? 100 : 800;
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g(0.0, 1.0);
        auto rnd = [&] { return cplx(g(rng), g(rng)); };
        Vector mu(n), v(n);
        RowVector w(n);
        Vector lambda(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu(i) = rnd();
            v(i) = rnd();
            lambda(i) = rnd() + cplx(100.0, 0.0);  // keep points well separated
            w(i) = rnd();
        }
        Matrix l1, ls1, l2, ls2;
        const double ts =
            time_best_of(reps, [&] { kernels::serial::loewner_fill(mu, v, lambda, w, l1, ls1); });
        const double tp =
            time_best_of(reps, [&] { kernels::loewner_fill(mu, v, lambda, w, l2, ls2); });
        if (l1 != l2 || ls1 != ls2) {
            std::fprintf(stderr, "loewner_fill: serial and parallel results differ\n");
            return 1;
        }
        row("loewner_fill", ts, tp);
    }

    {
        const std::size_t m = quick ? 10000 : 2000000;
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> logu(-1.0, 3.0);
        std::vector<double> omega(m), disc(m);
        for (std::size_t i = 0; i < m; ++i) {
            omega[i] = std::pow(10.0, logu(rng));
            disc[i] = std::abs(logu(rng));
        }
        const std::vector<double> anchors = {1.0, 30.0, 400.0};
        std::vector<char> exclude(m, 0);
        for (std::size_t i = 0; i < m; i += 97) exclude[i] = 1;
        std::vector<double> r1, r2;
        const double ts = time_best_of(
            reps, [&] { r1 = kernels::serial::masked_objective(omega, disc, anchors, 0.6, 1e-15, exclude); });
        const double tp = time_best_of(
            reps, [&] { r2 = kernels::masked_objective(omega, disc, anchors, 0.6, 1e-15, exclude); });
        if (r1 != r2) {
            std::fprintf(stderr, "masked_objective: serial and parallel results differ\n");
            return 1;
        }
        row("masked_objective", ts, tp);
    }

    return 0;
}
