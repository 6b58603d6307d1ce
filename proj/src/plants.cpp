#include "greedyid/plants.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace greedyid {

StateSpace make_penzl() {
    const Eigen::Index n = 1006;
    StateSpace m;
    m.E = Matrix::Identity(n, n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    const double w[3] = {100.0, 200.0, 400.0};
    for (int k = 0; k < 3; ++k) {
        const Eigen::Index o = 2 * k;
        a(o, o) = -1.0;
        a(o, o + 1) = w[k];
        a(o + 1, o) = -w[k];
        a(o + 1, o + 1) = -1.0;
    }
    for (Eigen::Index i = 0; i < 1000; ++i) a(6 + i, 6 + i) = -static_cast<double>(i + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
    b.head(6).setConstant(10.0);
    m.A = a.cast<cplx>();
    m.B = b.cast<cplx>();
    m.C = b.transpose().cast<cplx>();
    m.D = 0.0;
    m.real = true;
    return m;
}

StateSpace make_random_stable(int order, std::uint64_t seed) {
    if (order < 1) throw ConfigError("make_random_stable: order must be >= 1");
    const Eigen::Index n = order;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    const Eigen::Index pairs = n / 2;
    const bool odd = n % 2 == 1;
    const Eigen::Index slots = pairs + (odd ? 1 : 0);
    const double lw0 = std::log(0.3), lw1 = std::log(30.0);
    // One stratum per mode: independent draws over the whole band collide
    // for higher orders, and coincident resonances make the true order
    // numerically ambiguous. A 15% margin inside each stratum keeps any two
    // natural frequencies at least 30% of a stratum apart on the log scale.
    const double width = (lw1 - lw0) / static_cast<double>(slots);
    std::vector<double> freq(static_cast<std::size_t>(slots));
    for (Eigen::Index k = 0; k < slots; ++k)
        freq[static_cast<std::size_t>(k)] =
            std::exp(lw0 + width * (static_cast<double>(k) + 0.15 + 0.7 * unit(rng)));
    const Eigen::Index real_slot =
        odd ? static_cast<Eigen::Index>(static_cast<double>(slots) * unit(rng)) : slots;

    Eigen::Index o = 0;
    for (Eigen::Index s = 0; s < slots; ++s) {
        const double wn = freq[static_cast<std::size_t>(s)];
        if (s == real_slot) {
            a(n - 1, n - 1) = -wn;
            continue;
        }
        const double zeta = 0.02 + 0.18 * unit(rng);
        a(o, o) = -zeta * wn;
        a(o, o + 1) = wn;
        a(o + 1, o) = -wn;
        a(o + 1, o + 1) = -zeta * wn;
        o += 2;
    }

    auto gain = [&]() {
        const double mag = 0.5 + unit(rng);
        return unit(rng) < 0.5 ? -mag : mag;
    };
    Eigen::VectorXd b(n), c(n);
    for (Eigen::Index i = 0; i < n; ++i) b(i) = gain();
    for (Eigen::Index i = 0; i < n; ++i) c(i) = gain();

    StateSpace m;
    m.E = Matrix::Identity(n, n);
    m.A = a.cast<cplx>();
    m.B = b.cast<cplx>();
    m.C = c.transpose().cast<cplx>();
    m.D = 0.0;
    m.real = true;
    return m;
}

StateSpace make_random_stable_discrete(int order, std::uint64_t seed, double sample_time) {
    if (order < 1) throw ConfigError("make_random_stable_discrete: order must be >= 1");
    if (!(sample_time > 0.0))
        throw ConfigError("make_random_stable_discrete: sample time must be positive");
    const Eigen::Index n = order;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gauss(rng) / std::sqrt(double(n));
    const double rho = a.eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 0.0) a *= 0.9 / rho;

    Eigen::VectorXd b(n), c(n);
    for (Eigen::Index i = 0; i < n; ++i) b(i) = gauss(rng);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = gauss(rng);

    StateSpace m;
    m.E = Matrix::Identity(n, n);
    m.A = a.cast<cplx>();
    m.B = b.cast<cplx>();
    m.C = c.transpose().cast<cplx>();
    m.D = 0.0;
    m.domain = Domain::discrete;
    m.sample_time = sample_time;
    m.real = true;
    return m;
}

}  // namespace greedyid
