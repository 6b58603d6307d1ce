#include "greedyid/measurement.hpp"

#include <cmath>
#include <iomanip>

namespace greedyid {

ModelOracle::ModelOracle(const StateSpace& m, double noise_std, std::uint64_t seed)
    : model_(m), ev_(model_), noise_std_(noise_std), rng_(seed) {
    if (noise_std < 0.0) throw ConfigError("oracle: noise_std must be >= 0");
}

cplx ModelOracle::measure(cplx sigma) {
    cplx value = ev_(sigma);
    if (noise_std_ > 0.0) {
        const double g_re = gauss_(rng_);
        const double g_im = gauss_(rng_);
        value += noise_std_ * cplx(g_re, g_im);
    }
    const double omega = model_.domain == Domain::discrete && model_.sample_time > 0.0
                             ? std::arg(sigma) / model_.sample_time
                             : sigma.imag();
    log_.push_back({log_.size(), omega, sigma, value});
    return value;
}

void write_call_log_csv(std::ostream& os, const std::vector<CallRecord>& log) {
    os << "index, omega, h_re, h_im\n";
    os << std::setprecision(17);
    for (const CallRecord& r : log)
        os << r.index << ", " << r.omega << ", " << r.value.real() << ", " << r.value.imag()
           << "\n";
}

}  // namespace greedyid
