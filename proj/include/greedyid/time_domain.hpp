#pragma once

#include <cstddef>
#include <vector>

#include "greedyid/greedy.hpp"
#include "greedyid/lti.hpp"

namespace greedyid {

/// One excitation experiment: input u, sampled response y, sampling time, and
/// the index from which the response is treated as steady state.
struct DiscreteTrace {
    std::vector<cplx> u;
    std::vector<cplx> y;
    double sample_time{0.0};
    std::size_t k_min{0};

    std::size_t length() const { return u.size(); }

    /// u and y must be equally long, sample_time positive, and at least two
    /// samples must lie at or past k_min (the estimator needs two rows).
    void validate() const;
};

/// Least-squares estimates of the transfer function at two unit-circle angles.
struct TfEstimatePair {
    double sigma_a{0.0};
    double sigma_b{0.0};
    cplx h_a{0.0, 0.0};
    cplx h_b{0.0, 0.0};
    double residual{0.0};
};

/// Two-tone excitation u_p = (1+j)/K * (e^{j sigma_a p} + e^{j sigma_b p})
/// for p = 0..K-1. Angles must lie in [0, pi] and K must be at least 2; the
/// adaptive loop itself stays below Nyquist via its bin mapping. The 1/K
/// factor makes the DFT component at each tone equal (1+j)/K, so the
/// least-squares estimates come out in the transfer function's own scale.
std::vector<cplx> design_input(double sigma_a, double sigma_b, std::size_t K);

/// Smallest k whose magnitude profile repeats across two adjacent windows:
/// max_i | |y[k+i]| - |y[k+w+i]| | <= rel_tol * max_p |y_p| for i < window.
/// Returns ceil(K/2) when no k satisfies it. Throws TraceTooShort unless
/// the trace is longer than two windows.
std::size_t detect_kmin(const std::vector<cplx>& y, std::size_t window, double rel_tol);

/// Steady-state least squares on rows p = k_min..K-1 of
///   [U_a e^{j sigma_a p}, U_b e^{j sigma_b p}] * [h_a; h_b] = y_p,
/// where U_a, U_b are the (1/K-normalized) DFT components of the trace input
/// at the two angles. Throws ZeroInputComponent when either component is
/// numerically zero and IllConditioned when the 2-column system's condition
/// number exceeds 1e12 (angles too close for the available rows).
TfEstimatePair estimate_tf_pair(const DiscreteTrace& trace, double sigma_a, double sigma_b);

/// Source of sampled responses: feeds an input sequence to the plant and
/// returns the output of the same length.
class SimulationOracle {
  public:
    virtual ~SimulationOracle() = default;
    virtual std::vector<cplx> simulate(const std::vector<cplx>& u) = 0;
    virtual bool thread_safe() const { return false; }
};

/// Simulation oracle backed by a discrete state-space model; counts runs.
class ModelSimulator : public SimulationOracle {
  public:
    explicit ModelSimulator(const StateSpace& m);

    std::vector<cplx> simulate(const std::vector<cplx>& u) override;
    int runs() const { return runs_; }
    const StateSpace& model() const { return model_; }

  private:
    StateSpace model_;
    int runs_{0};
};

/// Sampling time that puts the top of the grid at 0.9x the Nyquist rate.
double default_sample_time(const FrequencyGrid& grid);

/// Adaptive identification from input/output experiments only. Runs the
/// frequency-domain greedy scheme on the unit circle: every candidate
/// frequency omega maps to z = e^{j omega Ts}, desired angles snap to DFT
/// bins 2 pi m / K (m in [1, K/2-1], collisions advance to the nearest free
/// bin) so the two-tone input has exactly two nonzero bins, and each point
/// pair costs one plant simulation followed by steady-state least squares.
/// History frequencies refer to the snapped bin angles mapped back through
/// Ts. Realization truncates at max(cfg.rank_tol, settle_rel_tol): estimates
/// are no more accurate than the settling tolerance, so singular directions
/// below it are dust. The returned model is real, discrete, with the given
/// sample time.
GreedyResult greedy_time_loop(SimulationOracle& plant, const GreedyConfig& cfg,
                              double sample_time, std::size_t K = 4096,
                              double settle_rel_tol = 1e-10);

/// Baseline for time-domain comparisons: estimates `count` log-equidistant
/// grid frequencies (bin-snapped, measured pairwise low-with-high) in one
/// pass and builds the compressed real model. count must be even and >= 2.
StateSpace equidistant_time(SimulationOracle& plant, int count, const GreedyConfig& cfg,
                            double sample_time, std::size_t K = 4096,
                            double settle_rel_tol = 1e-10);

}  // namespace greedyid
