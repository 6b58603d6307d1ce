#pragma once

#include <cstdint>

#include "greedyid/lti.hpp"

namespace greedyid {

/// Classic order-1006 benchmark: three lightly damped 2x2 blocks
/// [[-1, w], [-w, -1]] with w in {100, 200, 400}, a diag(-1, ..., -1000)
/// tail, B = C^T with the first six entries 10 and the remaining 1000
/// entries 1, E = I, D = 0. |H(jw)| peaks near 100, 200 and 400 rad/s.
StateSpace make_penzl();

/// Deterministic random stable continuous SISO model with E = I, D = 0.
/// Built from 2x2 resonant blocks with relative damping in [0.02, 0.2] (one
/// replaced by a real pole when the order is odd). Natural frequencies are
/// drawn one per stratum of a log partition of [0.3, 30] so no two modes
/// coincide; B and C entries have magnitude in [0.5, 1.5] with random signs.
/// Every mode is therefore identifiable in double precision.
StateSpace make_random_stable(int order, std::uint64_t seed);

/// Deterministic random stable discrete SISO model: dense Gaussian A
/// rescaled to spectral radius 0.9, Gaussian B and C, E = I, D = 0.
StateSpace make_random_stable_discrete(int order, std::uint64_t seed, double sample_time);

}  // namespace greedyid
