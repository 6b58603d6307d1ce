#pragma once

#include <cstdint>
#include <vector>

#include "greedyid/lti.hpp"
#include "greedyid/loewner.hpp"

namespace greedyid {

/// Multiplicative notch weight: exactly 0 when |sigma| equals |anchor|,
/// approaching 1 away from it. Frequencies enter through their magnitude on
/// a log scale: 1 - exp(-beta (ln(|sigma|+eps) - ln(|anchor|+eps))^2).
double mask_single(cplx sigma, cplx anchor, double beta, double epsilon);

/// Product of mask_single over all anchors (1 for an empty anchor set).
double mask_product(cplx sigma, const std::vector<cplx>& anchors, double beta, double epsilon);

/// Settings shared by the adaptive loops.
struct GreedyConfig {
    FrequencyGrid grid;
    double beta{0.6};
    double epsilon{1e-15};
    double tol{1e-8};
    int initial_count{6};
    int max_points{200};
    // Two decades under the default tol: truncating closer to tol leaves
    // realization noise in the successive-model gap and stalls convergence.
    double rank_tol{1e-12};
    double feedthrough{0.0};

    void validate() const;
};

/// Log-equidistant targets on [grid min, grid max] snapped to the nearest
/// grid point by absolute distance; collisions advance to the next nearest
/// unused point. Returns `count` distinct indices in ascending order.
std::vector<std::size_t> initial_points(const FrequencyGrid& grid, int count);

/// Max absolute pointwise gap between two models over the grid, evaluated at
/// each model's natural points (j*omega or exp(j*omega*Ts)).
double check_convergence(const StateSpace& hk, const StateSpace& hkm1, const FrequencyGrid& grid);

/// Argmax of mask_product(...) * |hk - hkm1| over the grid minus `exclude`
/// (matched on frequency). Ties resolve to the lowest frequency. Throws
/// GridExhausted when nothing remains and DegenerateObjective when the
/// objective vanishes identically (the models agree on every candidate).
cplx select_point(const StateSpace& hk, const StateSpace& hkm1,
                  const std::vector<cplx>& anchors, const GreedyConfig& cfg,
                  const std::vector<cplx>& exclude);

/// Source of frequency-response samples. Implementations that tolerate
/// concurrent measure() calls say so via thread_safe().
class MeasurementOracle {
  public:
    virtual ~MeasurementOracle() = default;
    virtual cplx measure(cplx sigma) = 0;
    virtual bool thread_safe() const { return false; }
};

enum class StopReason { converged, max_points, degenerate_objective, grid_exhausted };

/// One convergence check: the model built from `cumulative` measurements
/// compared against its predecessor. The first record covers the initial
/// batch and carries sigma_a = sigma_b = 0.
struct GreedyStep {
    double sigma_a{0.0};
    double sigma_b{0.0};
    double err{0.0};
    int order{0};
    int total_points{0};
    std::vector<double> cumulative;  // frequencies in acquisition order
    StateSpace model;
};

struct GreedyHistory {
    std::vector<double> initial;     // snapped initial frequencies, ascending
    std::vector<double> point_omega;  // every acquired frequency, acquisition order
    std::vector<cplx> point_value;    // response measured or estimated there
    std::vector<GreedyStep> steps;
    StopReason stop{StopReason::converged};
    bool converged{false};
    int measurement_count{0};
    double final_err{0.0};
};

struct GreedyResult {
    StateSpace model;
    GreedyHistory history;
};

/// Adaptive frequency-domain identification: measure an initial batch of
/// log-equidistant points, then grow the set two points per iteration at the
/// masked maxima of |H_k - H_{k-1}| until that gap falls below tol on the
/// whole grid or max_points is reached. Measurements are taken at +j*omega
/// only; conjugates are added before realization so models come out real.
GreedyResult greedy_loop(MeasurementOracle& oracle, const GreedyConfig& cfg);

}  // namespace greedyid
