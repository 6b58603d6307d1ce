#include "greedyid/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "greedyid/kernels.hpp"

namespace greedyid {

double mask_single(cplx sigma, cplx anchor, double beta, double epsilon) {
    const double d = std::log(std::abs(sigma) + epsilon) - std::log(std::abs(anchor) + epsilon);
    return 1.0 - std::exp(-beta * d * d);
}

double mask_product(cplx sigma, const std::vector<cplx>& anchors, double beta, double epsilon) {
    double m = 1.0;
    for (const cplx& a : anchors) m *= mask_single(sigma, a, beta, epsilon);
    return m;
}

void GreedyConfig::validate() const {
    grid.validate();
    if (!(beta > 0.0)) throw ConfigError("greedy: beta must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("greedy: epsilon must be positive");
    if (!(tol > 0.0)) throw ConfigError("greedy: tol must be positive");
    if (initial_count < 4 || initial_count % 2 != 0)
        throw ConfigError("greedy: initial_count must be even and at least 4");
    if (max_points < initial_count)
        throw ConfigError("greedy: max_points must be at least initial_count");
    if (rank_tol < 0.0) throw ConfigError("greedy: rank_tol must be >= 0");
    if (static_cast<std::size_t>(initial_count) > grid.size())
        throw GridTooSmall("greedy: grid has fewer points than the initial batch");
}

std::vector<std::size_t> initial_points(const FrequencyGrid& grid, int count) {
    grid.validate();
    if (count < 1) throw ConfigError("initial_points: count must be positive");
    if (static_cast<std::size_t>(count) > grid.size())
        throw GridTooSmall("initial_points: grid has fewer points than requested");
    if (!(grid.omega.front() > 0.0))
        throw ConfigError("initial_points: frequencies must be positive");
    const double lmin = std::log(grid.omega.front());
    const double lmax = std::log(grid.omega.back());
    std::vector<std::size_t> chosen;
    chosen.reserve(static_cast<std::size_t>(count));
    std::vector<char> used(grid.size(), 0);
    for (int i = 0; i < count; ++i) {
        const double target =
            count == 1 ? grid.omega.front()
                       : std::exp(lmin + (lmax - lmin) * static_cast<double>(i) / (count - 1));
        std::size_t best = grid.size();
        double best_d = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (used[g]) continue;
            const double d = std::abs(grid.omega[g] - target);
            if (best == grid.size() || d < best_d) {
                best = g;
                best_d = d;
            }
        }
        used[best] = 1;
        chosen.push_back(best);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

namespace {

std::vector<cplx> natural_points(const StateSpace& m, const FrequencyGrid& grid) {
    std::vector<cplx> pts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = eval_point(m, grid.omega[i]);
    return pts;
}

std::size_t argmax_low(const std::vector<double>& obj) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < obj.size(); ++i)
        if (obj[i] > obj[best]) best = i;
    return best;
}

}  // namespace

double check_convergence(const StateSpace& hk, const StateSpace& hkm1,
                         const FrequencyGrid& grid) {
    grid.validate();
    const TfEvaluator ek(hk);
    const TfEvaluator ep(hkm1);
    const std::vector<cplx> rk = kernels::frequency_response(ek, natural_points(hk, grid));
    const std::vector<cplx> rp = kernels::frequency_response(ep, natural_points(hkm1, grid));
    double gap = 0.0;
    for (std::size_t i = 0; i < rk.size(); ++i) gap = std::max(gap, std::abs(rk[i] - rp[i]));
    return gap;
}

cplx select_point(const StateSpace& hk, const StateSpace& hkm1,
                  const std::vector<cplx>& anchors, const GreedyConfig& cfg,
                  const std::vector<cplx>& exclude) {
    cfg.grid.validate();
    const std::size_t m = cfg.grid.size();
    const TfEvaluator ek(hk);
    const TfEvaluator ep(hkm1);
    const std::vector<cplx> cand = natural_points(hk, cfg.grid);
    const std::vector<cplx> rk = kernels::frequency_response(ek, cand);
    const std::vector<cplx> rp = kernels::frequency_response(ep, natural_points(hkm1, cfg.grid));
    std::vector<double> disc(m);
    for (std::size_t i = 0; i < m; ++i) disc[i] = std::abs(rk[i] - rp[i]);

    std::vector<char> excl(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const double tol = 1e-12 * (1.0 + std::abs(cand[i]));
        for (const cplx& e : exclude) {
            if (std::abs(e - cand[i]) <= tol || std::abs(std::conj(e) - cand[i]) <= tol) {
                excl[i] = 1;
                break;
            }
        }
    }
    std::vector<double> anch(anchors.size());
    for (std::size_t a = 0; a < anchors.size(); ++a) anch[a] = std::abs(anchors[a]);

    const std::vector<double> obj =
        kernels::masked_objective(cfg.grid.omega, disc, anch, cfg.beta, cfg.epsilon, excl);
    const std::size_t best = argmax_low(obj);
    if (obj[best] < 0.0) throw GridExhausted("select_point: every candidate is excluded");
    if (obj[best] == 0.0)
        throw DegenerateObjective("select_point: objective vanishes on all candidates");
    return cand[best];
}

GreedyResult greedy_loop(MeasurementOracle& oracle, const GreedyConfig& cfg) {
    cfg.validate();
    const std::vector<double>& om = cfg.grid.omega;
    const std::size_t m = om.size();

    GreedyHistory hist;
    std::vector<double> freq;  // acquisition order
    std::vector<cplx> vals;
    std::vector<char> excluded(m, 0);

    for (std::size_t g : initial_points(cfg.grid, cfg.initial_count)) {
        vals.push_back(oracle.measure(cplx(0.0, om[g])));
        freq.push_back(om[g]);
        excluded[g] = 1;
        hist.initial.push_back(om[g]);
    }

    auto build = [&](std::size_t n) {
        std::vector<cplx> pts(n);
        for (std::size_t i = 0; i < n; ++i) pts[i] = cplx(0.0, freq[i]);
        const std::vector<cplx> vv(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(n));
        const std::vector<double> kk(freq.begin(), freq.begin() + static_cast<std::ptrdiff_t>(n));
        const MeasurementSet ms = paired_split(pts, vv, kk);
        const LoewnerPencil pencil = build_pencil(ms, cplx(cfg.feedthrough, 0.0));
        return compress_realize(realify_pencil(pencil), cfg.rank_tol);
    };

    std::vector<cplx> grid_pts(m);
    for (std::size_t i = 0; i < m; ++i) grid_pts[i] = cplx(0.0, om[i]);
    auto sweep = [&](const StateSpace& model) {
        const TfEvaluator ev(model);
        return kernels::frequency_response(ev, grid_pts);
    };

    StateSpace hkm1 = build(freq.size() - 2);
    StateSpace hk = build(freq.size());
    std::vector<cplx> resp_prev = sweep(hkm1);
    std::vector<cplx> resp_cur = sweep(hk);

    double pa = 0.0;
    double pb = 0.0;
    StopReason stop = StopReason::converged;
    std::vector<double> disc(m);
    while (true) {
        double err = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            disc[i] = std::abs(resp_cur[i] - resp_prev[i]);
            err = std::max(err, disc[i]);
        }
        GreedyStep step;
        step.sigma_a = pa;
        step.sigma_b = pb;
        step.err = err;
        step.order = static_cast<int>(hk.order());
        step.total_points = static_cast<int>(freq.size());
        step.cumulative = freq;
        step.model = hk;
        hist.steps.push_back(std::move(step));
        hist.final_err = err;

        if (err <= cfg.tol) {
            stop = StopReason::converged;
            hist.converged = true;
            break;
        }
        if (static_cast<int>(freq.size()) + 2 > cfg.max_points) {
            stop = StopReason::max_points;
            break;
        }

        // Both next points are determined by the cached sweeps, so resolve the
        // whole pair before measuring anything; a degenerate objective then
        // stops the loop with the measurement budget intact.
        const std::size_t n = freq.size();
        const std::vector<double> anchors_a = {freq[n - 2], freq[n - 1]};
        const std::vector<double> obj_a =
            kernels::masked_objective(om, disc, anchors_a, cfg.beta, cfg.epsilon, excluded);
        const std::size_t ia = argmax_low(obj_a);
        if (obj_a[ia] < 0.0) {
            stop = StopReason::grid_exhausted;
            break;
        }
        if (obj_a[ia] == 0.0) {
            stop = StopReason::degenerate_objective;
            break;
        }

        std::vector<double> anchors_b = anchors_a;
        anchors_b.push_back(om[ia]);
        std::vector<char> excl_b = excluded;
        excl_b[ia] = 1;
        const std::vector<double> obj_b =
            kernels::masked_objective(om, disc, anchors_b, cfg.beta, cfg.epsilon, excl_b);
        const std::size_t ib = argmax_low(obj_b);
        if (obj_b[ib] < 0.0) {
            stop = StopReason::grid_exhausted;
            break;
        }
        if (obj_b[ib] == 0.0) {
            stop = StopReason::degenerate_objective;
            break;
        }

        vals.push_back(oracle.measure(cplx(0.0, om[ia])));
        freq.push_back(om[ia]);
        excluded[ia] = 1;
        vals.push_back(oracle.measure(cplx(0.0, om[ib])));
        freq.push_back(om[ib]);
        excluded[ib] = 1;
        pa = om[ia];
        pb = om[ib];

        hkm1 = std::move(hk);
        resp_prev = std::move(resp_cur);
        hk = build(freq.size());
        resp_cur = sweep(hk);
    }

    hist.stop = stop;
    hist.measurement_count = static_cast<int>(freq.size());
    hist.point_omega = std::move(freq);
    hist.point_value = std::move(vals);
    GreedyResult res;
    res.model = std::move(hk);
    res.history = std::move(hist);
    return res;
}

}  // namespace greedyid
