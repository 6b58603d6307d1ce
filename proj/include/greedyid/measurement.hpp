#pragma once

#include <cstdint>
#include <mutex>
#include <ostream>
#include <random>
#include <vector>

#include "greedyid/greedy.hpp"
#include "greedyid/lti.hpp"

namespace greedyid {

/// One oracle query: sequential index, the pre-image frequency of the
/// evaluation point, the point itself, and the (possibly noisy) value.
struct CallRecord {
    std::size_t index{0};
    double omega{0.0};
    cplx sigma{0.0, 0.0};
    cplx value{0.0, 0.0};
};

/// Frequency-response oracle backed by a state-space model, with optional
/// additive noise: value = H(sigma) + noise_std * (g1 + j g2) where g1, g2
/// are independent standard normal draws from a seeded 64-bit Mersenne
/// twister. noise_std == 0 skips the draws entirely, so noiseless results do
/// not depend on the seed. Calls are appended to an immutable log; replays
/// with the same seed and query order reproduce values exactly.
class ModelOracle : public MeasurementOracle {
  public:
    explicit ModelOracle(const StateSpace& m, double noise_std = 0.0, std::uint64_t seed = 0);

    cplx measure(cplx sigma) override;

    const std::vector<CallRecord>& call_log() const { return log_; }
    const StateSpace& model() const { return model_; }
    double noise_std() const { return noise_std_; }

  private:
    StateSpace model_;
    TfEvaluator ev_;
    double noise_std_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::vector<CallRecord> log_;
};

/// Writes "index, omega, h_re, h_im" rows with a header line.
void write_call_log_csv(std::ostream& os, const std::vector<CallRecord>& log);

/// Serializing adapter: any oracle becomes safe for concurrent measure()
/// calls. Log order under contention is scheduling-dependent, counts are not.
class LockedOracle : public MeasurementOracle {
  public:
    explicit LockedOracle(MeasurementOracle& inner) : inner_(inner) {}

    cplx measure(cplx sigma) override {
        const std::lock_guard<std::mutex> hold(gate_);
        return inner_.measure(sigma);
    }
    bool thread_safe() const override { return true; }

  private:
    MeasurementOracle& inner_;
    std::mutex gate_;
};

}  // namespace greedyid
