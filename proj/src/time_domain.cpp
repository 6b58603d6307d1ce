#include "greedyid/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <Eigen/QR>

#include "greedyid/kernels.hpp"
#include "greedyid/loewner.hpp"

namespace greedyid {

void DiscreteTrace::validate() const {
    if (u.size() != y.size()) throw DimensionMismatch("trace: input and output lengths differ");
    if (u.empty()) throw EmptyData("trace: empty");
    if (!(sample_time > 0.0)) throw ConfigError("trace: sample_time must be positive");
    if (k_min >= u.size() || u.size() - k_min < 2)
        throw ConfigError("trace: fewer than two samples at or past k_min");
}

std::vector<cplx> design_input(double sigma_a, double sigma_b, std::size_t K) {
    if (K < 2) throw ConfigError("design_input: need at least two samples");
    if (!(sigma_a >= 0.0) || !(sigma_a <= M_PI) || !(sigma_b >= 0.0) || !(sigma_b <= M_PI))
        throw ConfigError("design_input: angles must lie in [0, pi]");
    const cplx amp = cplx(1.0, 1.0) / static_cast<double>(K);
    std::vector<cplx> u(K);
    for (std::size_t p = 0; p < K; ++p) {
        const double t = static_cast<double>(p);
        u[p] = amp * (std::polar(1.0, sigma_a * t) + std::polar(1.0, sigma_b * t));
    }
    return u;
}

std::size_t detect_kmin(const std::vector<cplx>& y, std::size_t window, double rel_tol) {
    if (window == 0) throw ConfigError("detect_kmin: window must be positive");
    if (rel_tol < 0.0) throw ConfigError("detect_kmin: rel_tol must be >= 0");
    if (y.size() <= 2 * window)
        throw TraceTooShort("detect_kmin: trace no longer than two windows");
    std::vector<double> mag(y.size());
    double scale = 0.0;
    for (std::size_t p = 0; p < y.size(); ++p) {
        mag[p] = std::abs(y[p]);
        scale = std::max(scale, mag[p]);
    }
    const double tol = rel_tol * scale;
    const std::size_t last = y.size() - 2 * window;
    for (std::size_t k = 0; k <= last; ++k) {
        bool settled = true;
        for (std::size_t i = 0; i < window; ++i) {
            if (std::abs(mag[k + i] - mag[k + window + i]) > tol) {
                settled = false;
                break;
            }
        }
        if (settled) return k;
    }
    return (y.size() + 1) / 2;
}

TfEstimatePair estimate_tf_pair(const DiscreteTrace& trace, double sigma_a, double sigma_b) {
    trace.validate();
    if (sigma_a == sigma_b) throw ConfigError("estimate_tf_pair: angles must be distinct");
    const std::size_t len = trace.length();
    auto dft_component = [&](double sigma) {
        cplx acc(0.0, 0.0);
        for (std::size_t p = 0; p < len; ++p)
            acc += trace.u[p] * std::polar(1.0, -sigma * static_cast<double>(p));
        return acc / static_cast<double>(len);
    };
    const cplx ua = dft_component(sigma_a);
    const cplx ub = dft_component(sigma_b);
    if (std::abs(ua) <= 1e-14 || std::abs(ub) <= 1e-14)
        throw ZeroInputComponent("estimate_tf_pair: no input energy at a requested angle");

    const Eigen::Index n = static_cast<Eigen::Index>(len - trace.k_min);
    Matrix f(n, 2);
    Vector rhs(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::size_t p = trace.k_min + static_cast<std::size_t>(r);
        const double t = static_cast<double>(p);
        f(r, 0) = ua * std::polar(1.0, sigma_a * t);
        f(r, 1) = ub * std::polar(1.0, sigma_b * t);
        rhs(r) = trace.y[p];
    }

    // cond(F)^2 is the eigenvalue ratio of the 2x2 Gram matrix, in closed form
    const Eigen::Matrix2cd g = f.adjoint() * f;
    const double tr = g(0, 0).real() + g(1, 1).real();
    const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
    const double root = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lo = 0.5 * (tr - root);
    const double hi = 0.5 * (tr + root);
    if (!(lo > 0.0) || std::sqrt(hi / lo) > 1e12)
        throw IllConditioned("estimate_tf_pair: angles too close for the available rows");

    const Eigen::Vector2cd h = f.householderQr().solve(rhs);
    TfEstimatePair out;
    out.sigma_a = sigma_a;
    out.sigma_b = sigma_b;
    out.h_a = h(0);
    out.h_b = h(1);
    out.residual = (f * h - rhs).norm();
    return out;
}

ModelSimulator::ModelSimulator(const StateSpace& m) : model_(m) {
    model_.validate();
    if (model_.domain != Domain::discrete)
        throw ConfigError("ModelSimulator: model must be discrete");
}

std::vector<cplx> ModelSimulator::simulate(const std::vector<cplx>& u) {
    ++runs_;
    return simulate_discrete(model_, u);
}

double default_sample_time(const FrequencyGrid& grid) {
    grid.validate();
    return 0.9 * M_PI / grid.omega.back();
}

namespace {

std::size_t argmax_low(const std::vector<double>& obj) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < obj.size(); ++i)
        if (obj[i] > obj[best]) best = i;
    return best;
}

// The two-tone steady state's magnitude profile repeats with period
// K / gcd(K, bin gap); use that as the settling window when it fits in a
// quarter trace, else fall back to K/4 (detect_kmin then lands on K/2).
std::size_t settle_window(std::size_t bin_a, std::size_t bin_b, std::size_t K) {
    const std::size_t gap = bin_a > bin_b ? bin_a - bin_b : bin_b - bin_a;
    if (gap == 0) return K / 4;
    const std::size_t period = K / std::gcd(K, gap);
    return (period <= K / 4) ? period : K / 4;
}

// Snapping of desired angles onto unique DFT bins m in [1, K/2 - 1],
// sigma = 2 pi m / K. Off-bin tones would leak into every bin and spoil the
// normalized component values the estimator divides by.
struct BinMapper {
    std::size_t K;
    std::size_t half;
    double bin_angle;
    double sample_time;
    std::vector<char> used;

    BinMapper(std::size_t K_, double ts)
        : K(K_), half(K_ / 2), bin_angle(2.0 * M_PI / static_cast<double>(K_)),
          sample_time(ts), used(half, 0) {}

    std::size_t bin_of(double omega) const {
        long long b = std::llround(omega * sample_time / bin_angle);
        if (b < 1) b = 1;
        if (b > static_cast<long long>(half - 1)) b = static_cast<long long>(half - 1);
        return static_cast<std::size_t>(b);
    }

    // nearest free bin; equally distant candidates resolve to the lower one
    std::ptrdiff_t snap_free(std::size_t want) const {
        if (!used[want]) return static_cast<std::ptrdiff_t>(want);
        for (std::size_t d = 1; d < half; ++d) {
            if (want >= 1 + d && !used[want - d]) return static_cast<std::ptrdiff_t>(want - d);
            if (want + d <= half - 1 && !used[want + d])
                return static_cast<std::ptrdiff_t>(want + d);
        }
        return -1;
    }

    double angle(std::size_t bin) const { return bin_angle * static_cast<double>(bin); }
    double frequency(std::size_t bin) const { return angle(bin) / sample_time; }
};

struct PairSampler {
    SimulationOracle& plant;
    BinMapper& bins;
    std::size_t K;
    double settle_rel_tol;
    std::vector<double> freq;  // effective frequencies, acquisition order
    std::vector<cplx> zpts;
    std::vector<cplx> vals;

    void measure_pair(std::size_t ba, std::size_t bb) {
        const double sa = bins.angle(ba);
        const double sb = bins.angle(bb);
        DiscreteTrace tr;
        tr.u = design_input(sa, sb, K);
        tr.y = plant.simulate(tr.u);
        tr.sample_time = bins.sample_time;
        tr.k_min = detect_kmin(tr.y, settle_window(ba, bb, K), settle_rel_tol);
        const TfEstimatePair est = estimate_tf_pair(tr, sa, sb);
        bins.used[ba] = 1;
        bins.used[bb] = 1;
        freq.push_back(bins.frequency(ba));
        zpts.push_back(std::polar(1.0, sa));
        vals.push_back(est.h_a);
        freq.push_back(bins.frequency(bb));
        zpts.push_back(std::polar(1.0, sb));
        vals.push_back(est.h_b);
    }

    // Reserves one bin per requested grid frequency, sorted ascending, and
    // measures pairs (i, i + count/2) so each system mixes a low and a high
    // tone (well separated angles keep the least squares well conditioned).
    std::vector<std::size_t> bootstrap(const FrequencyGrid& grid, int count) {
        std::vector<std::size_t> chosen;
        for (std::size_t g : initial_points(grid, count)) {
            const std::ptrdiff_t b = bins.snap_free(bins.bin_of(grid.omega[g]));
            if (b < 0) throw GridTooSmall("time loop: not enough DFT bins");
            bins.used[static_cast<std::size_t>(b)] = 1;
            chosen.push_back(static_cast<std::size_t>(b));
        }
        std::sort(chosen.begin(), chosen.end());
        const std::size_t pairs = chosen.size() / 2;
        for (std::size_t i = 0; i < pairs; ++i) measure_pair(chosen[i], chosen[i + pairs]);
        return chosen;
    }

    StateSpace build(std::size_t n, const GreedyConfig& cfg) const {
        const auto cut = static_cast<std::ptrdiff_t>(n);
        const std::vector<cplx> pts(zpts.begin(), zpts.begin() + cut);
        const std::vector<cplx> vv(vals.begin(), vals.begin() + cut);
        const std::vector<double> kk(freq.begin(), freq.begin() + cut);
        const MeasurementSet ms = paired_split(pts, vv, kk);
        const LoewnerPencil pencil = build_pencil(ms, cplx(cfg.feedthrough, 0.0));
        // Trace-based estimates are only accurate to the settling tolerance,
        // so singular directions below it are estimation dust, not structure.
        StateSpace model = compress_realize(realify_pencil(pencil),
                                            std::max(cfg.rank_tol, settle_rel_tol));
        model.domain = Domain::discrete;
        model.sample_time = bins.sample_time;
        return model;
    }
};

void check_time_params(double sample_time, std::size_t K) {
    if (!(sample_time > 0.0)) throw ConfigError("time loop: sample_time must be positive");
    if (K < 16 || K % 2 != 0) throw ConfigError("time loop: K must be even and at least 16");
}

}  // namespace

StateSpace equidistant_time(SimulationOracle& plant, int count, const GreedyConfig& cfg,
                            double sample_time, std::size_t K, double settle_rel_tol) {
    cfg.grid.validate();
    check_time_params(sample_time, K);
    if (count < 2 || count % 2 != 0)
        throw ConfigError("equidistant_time: count must be even and at least 2");
    BinMapper bins(K, sample_time);
    PairSampler sampler{plant, bins, K, settle_rel_tol, {}, {}, {}};
    sampler.bootstrap(cfg.grid, count);
    return sampler.build(sampler.freq.size(), cfg);
}

GreedyResult greedy_time_loop(SimulationOracle& plant, const GreedyConfig& cfg,
                              double sample_time, std::size_t K, double settle_rel_tol) {
    cfg.validate();
    check_time_params(sample_time, K);

    const std::vector<double>& om = cfg.grid.omega;
    const std::size_t m = om.size();
    std::vector<cplx> zgrid(m);
    for (std::size_t i = 0; i < m; ++i) zgrid[i] = to_unit_circle(om[i], sample_time);

    BinMapper bins(K, sample_time);
    PairSampler sampler{plant, bins, K, settle_rel_tol, {}, {}, {}};

    GreedyHistory hist;
    for (std::size_t b : sampler.bootstrap(cfg.grid, cfg.initial_count))
        hist.initial.push_back(bins.frequency(b));

    auto sweep = [&](const StateSpace& model) {
        const TfEvaluator ev(model);
        return kernels::frequency_response(ev, zgrid);
    };

    std::vector<char> excluded(m, 0);
    auto refresh_excluded = [&]() {
        for (std::size_t i = 0; i < m; ++i)
            if (!excluded[i] && bins.used[bins.bin_of(om[i])]) excluded[i] = 1;
    };
    refresh_excluded();

    StateSpace hkm1 = sampler.build(sampler.freq.size() - 2, cfg);
    StateSpace hk = sampler.build(sampler.freq.size(), cfg);
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
        step.total_points = static_cast<int>(sampler.freq.size());
        step.cumulative = sampler.freq;
        step.model = hk;
        hist.steps.push_back(std::move(step));
        hist.final_err = err;

        if (err <= cfg.tol) {
            stop = StopReason::converged;
            hist.converged = true;
            break;
        }
        if (static_cast<int>(sampler.freq.size()) + 2 > cfg.max_points) {
            stop = StopReason::max_points;
            break;
        }

        // Resolve the whole pair from the cached sweeps before running any
        // experiment, so early stops never cost a simulation.
        const std::size_t n = sampler.freq.size();
        const std::vector<double> anchors_a = {sampler.freq[n - 2], sampler.freq[n - 1]};
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
        const std::ptrdiff_t snap_a = bins.snap_free(bins.bin_of(om[ia]));
        if (snap_a < 0) {
            stop = StopReason::grid_exhausted;
            break;
        }
        const std::size_t ba = static_cast<std::size_t>(snap_a);
        const double fa = bins.frequency(ba);

        std::vector<double> anchors_b = anchors_a;
        anchors_b.push_back(fa);
        std::vector<char> excl_b = excluded;
        for (std::size_t i = 0; i < m; ++i)
            if (!excl_b[i] && bins.bin_of(om[i]) == ba) excl_b[i] = 1;
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
        bins.used[ba] = 1;  // reserve so the partner snaps elsewhere
        const std::ptrdiff_t snap_b = bins.snap_free(bins.bin_of(om[ib]));
        if (snap_b < 0) {
            stop = StopReason::grid_exhausted;
            break;
        }
        const std::size_t bb = static_cast<std::size_t>(snap_b);

        sampler.measure_pair(ba, bb);
        refresh_excluded();
        pa = fa;
        pb = bins.frequency(bb);

        hkm1 = std::move(hk);
        resp_prev = std::move(resp_cur);
        hk = sampler.build(sampler.freq.size(), cfg);
        resp_cur = sweep(hk);
    }

    hist.stop = stop;
    hist.measurement_count = static_cast<int>(sampler.freq.size());
    hist.point_omega = std::move(sampler.freq);
    hist.point_value = std::move(sampler.vals);
    GreedyResult res;
    res.model = std::move(hk);
    res.history = std::move(hist);
    return res;
}

}  // namespace greedyid
