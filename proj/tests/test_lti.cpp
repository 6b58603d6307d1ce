#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "greedyid/lti.hpp"
#include "greedyid/plants.hpp"

using namespace greedyid;

namespace {

double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// Independent route: diagonalize A and sum first-order terms.
cplx partial_fraction_eval(const StateSpace& m, cplx s) {
    Eigen::ComplexEigenSolver<Matrix> ces(m.A);
    const Vector lam = ces.eigenvalues();
    const Matrix v = ces.eigenvectors();
    const Vector w = v.partialPivLu().solve(m.B);
    const RowVector g = m.C * v;
    cplx acc = m.D;
    for (Eigen::Index i = 0; i < lam.size(); ++i) acc += g(i) * w(i) / (s - lam(i));
    return acc;
}

StateSpace random_descriptor(int order, std::uint64_t seed, bool complex_parts) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::Index n = order;
    auto draw = [&]() {
        return complex_parts ? cplx(gauss(rng), gauss(rng)) : cplx(gauss(rng), 0.0);
    };
    StateSpace m;
    m.E = Matrix::Identity(n, n);
    m.A = Matrix(n, n);
    m.B = Vector(n);
    m.C = RowVector(n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            m.A(i, j) = draw();
            m.E(i, j) += 0.3 * draw();
        }
    for (Eigen::Index i = 0; i < n; ++i) m.B(i) = draw();
    for (Eigen::Index i = 0; i < n; ++i) m.C(i) = draw();
    m.D = draw();
    m.refresh_real_flag();
    return m;
}

}  // namespace

TEST_CASE("log grid hits both endpoints exactly and grows monotonically") {
    const FrequencyGrid g = FrequencyGrid::log_spaced(0.1, 1000.0, 500);
    REQUIRE(g.size() == 500);
    CHECK(g.omega.front() == 0.1);
    CHECK(g.omega.back() == 1000.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.omega[i] > g.omega[i - 1]);
    // log spacing: ratio of consecutive points is constant
    const double r0 = g.omega[1] / g.omega[0];
    const double r1 = g.omega[250] / g.omega[249];
    CHECK(std::abs(r0 - r1) < 1e-12);
    g.validate();
}

TEST_CASE("log grid rejects bad ranges and sizes") {
    CHECK_THROWS_AS(FrequencyGrid::log_spaced(0.1, 1000.0, 1), GridTooSmall);
    CHECK_THROWS_AS(FrequencyGrid::log_spaced(0.0, 1000.0, 10), GridTooSmall);
    CHECK_THROWS_AS(FrequencyGrid::log_spaced(10.0, 10.0, 10), GridTooSmall);
    FrequencyGrid g;
    g.omega = {1.0, 2.0, 2.0};
    CHECK_THROWS_AS(g.validate(), GridTooSmall);
}

TEST_CASE("unit-circle map preserves the angle and rejects the Nyquist limit") {
    const double ts = 0.01;
    const cplx z = to_unit_circle(50.0, ts);
    CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
    CHECK(std::abs(std::arg(z) - 0.5) < 1e-15);
    CHECK_THROWS_AS(to_unit_circle(M_PI / ts, ts), AboveNyquist);
    CHECK_THROWS_AS(to_unit_circle(400.0, ts), AboveNyquist);
    CHECK_THROWS_AS(to_unit_circle(1.0, 0.0), ConfigError);
}

TEST_CASE("state-space validation catches shape and sampling errors") {
    StateSpace m;
    m.E = Matrix::Identity(2, 2);
    m.A = Matrix::Identity(2, 2);
    m.B = Vector::Ones(2);
    m.C = RowVector::Ones(2);
    m.validate();

    StateSpace bad = m;
    bad.B = Vector::Ones(3);
    CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
    bad = m;
    bad.E = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
    bad = m;
    bad.domain = Domain::discrete;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.sample_time = 0.01;
    bad.validate();
}

TEST_CASE("real flag tracks exact imaginary content") {
    StateSpace m = make_random_stable(4, 11);
    CHECK(m.real);
    CHECK(m.max_imag() == 0.0);
    m.A(1, 1) += cplx(0.0, 1e-18);
    m.refresh_real_flag();
    CHECK_FALSE(m.real);
    CHECK(m.max_imag() == 1e-18);
}

TEST_CASE("transfer function matches a partial-fraction oracle on E = I plants") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const StateSpace m = make_random_stable(7, seed);
        for (double w : {0.05, 0.7, 3.0, 11.0, 90.0}) {
            const cplx s(0.0, w);
            CHECK(rel_err(eval_tf(m, s), partial_fraction_eval(m, s)) < 1e-9);
        }
    }
}

TEST_CASE("transfer function handles a general descriptor pencil") {
    const StateSpace m = random_descriptor(6, 17, false);
    for (double w : {0.1, 1.0, 10.0}) {
        const cplx s(0.0, w);
        const Matrix pencil = s * m.E - m.A;
        const cplx want = (m.C * pencil.colPivHouseholderQr().solve(m.B))(0) + m.D;
        CHECK(rel_err(eval_tf(m, s), want) < 1e-10);
    }
}

TEST_CASE("repeated evaluator agrees with the direct formula") {
    std::vector<StateSpace> models;
    models.push_back(make_random_stable(6, 5));
    models.push_back(random_descriptor(6, 7, false));
    models.push_back(random_descriptor(5, 9, true));
    for (const StateSpace& m : models) {
        const TfEvaluator ev(m);
        REQUIRE(ev.order() == m.order());
        for (double w : {0.07, 0.9, 4.0, 33.0}) {
            const cplx s(0.0, w);
            CHECK(rel_err(ev(s), eval_tf(m, s)) < 1e-9);
        }
        // off-axis points work too
        const cplx s(0.5, 2.0);
        CHECK(rel_err(ev(s), eval_tf(m, s)) < 1e-9);
    }
}

TEST_CASE("repeated evaluator handles the order-1006 benchmark") {
    const StateSpace m = make_penzl();
    const TfEvaluator ev(m);
    for (double w : {0.1, 31.0, 100.0, 417.0, 1000.0}) {
        const cplx s(0.0, w);
        CHECK(rel_err(ev(s), eval_tf(m, s)) < 1e-8);
    }
}

TEST_CASE("order-0 models evaluate to their feed-through") {
    StateSpace m;
    m.E = Matrix(0, 0);
    m.A = Matrix(0, 0);
    m.B = Vector(0);
    m.C = RowVector(0);
    m.D = cplx(2.5, -1.0);
    CHECK(eval_tf(m, cplx(0.0, 3.0)) == m.D);
    const TfEvaluator ev(m);
    CHECK(ev(cplx(0.0, 3.0)) == m.D);
}

TEST_CASE("singular pencils are reported instead of returning garbage") {
    StateSpace m;
    m.E = Matrix::Identity(2, 2);
    m.A = Matrix::Zero(2, 2);
    m.A(0, 0) = 1.0;
    m.A(1, 1) = 2.0;
    m.B = Vector::Ones(2);
    m.C = RowVector::Ones(2);
    m.refresh_real_flag();
    CHECK_THROWS_AS(eval_tf(m, cplx(1.0, 0.0)), SingularPencil);
    const TfEvaluator ev(m);
    CHECK_THROWS_AS(ev(cplx(1.0, 0.0)), SingularPencil);
    CHECK(rel_err(ev(cplx(0.0, 1.0)), eval_tf(m, cplx(0.0, 1.0))) < 1e-12);
}

TEST_CASE("benchmark magnitude peaks sit at the three resonances") {
    const StateSpace m = make_penzl();
    REQUIRE(m.order() == 1006);
    const TfEvaluator ev(m);
    for (double peak : {100.0, 200.0, 400.0}) {
        const double at_peak = std::abs(ev(cplx(0.0, peak)));
        const double off_peak = std::abs(ev(cplx(0.0, peak * 1.35)));
        CHECK(at_peak > 5.0 * off_peak);
    }
}

TEST_CASE("discrete simulation: unit delay shifts the input by one sample") {
    StateSpace m;
    m.E = Matrix::Identity(1, 1);
    m.A = Matrix::Zero(1, 1);
    m.B = Vector::Ones(1);
    m.C = RowVector::Ones(1);
    m.domain = Domain::discrete;
    m.sample_time = 1.0;
    m.refresh_real_flag();
    const std::vector<cplx> u = {1.0, 0.0, 0.0};
    const std::vector<cplx> y = simulate_discrete(m, u);
    REQUIRE(y.size() == 3);
    CHECK(std::abs(y[0]) == 0.0);
    CHECK(std::abs(y[1] - cplx(1.0, 0.0)) == 0.0);
    CHECK(std::abs(y[2]) == 0.0);
}

TEST_CASE("discrete simulation converges to the frequency response on a pure tone") {
    const StateSpace m = make_random_stable_discrete(5, 23, 0.1);
    const double theta = 0.7;
    const cplx z = std::polar(1.0, theta);
    const std::size_t len = 512;
    std::vector<cplx> u(len);
    for (std::size_t p = 0; p < len; ++p) u[p] = std::pow(z, static_cast<double>(p));
    const std::vector<cplx> y = simulate_discrete(m, u);
    const cplx want = eval_tf(m, z);
    CHECK(rel_err(y.back() / u.back(), want) < 1e-8);
}

TEST_CASE("discrete simulation rejects misuse") {
    StateSpace cont = make_random_stable(3, 31);
    CHECK_THROWS_AS(simulate_discrete(cont, {1.0}), ConfigError);

    StateSpace sing = make_random_stable_discrete(2, 37, 0.5);
    sing.E = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(simulate_discrete(sing, {1.0}), SingularE);

    StateSpace gain;
    gain.E = Matrix(0, 0);
    gain.A = Matrix(0, 0);
    gain.B = Vector(0);
    gain.C = RowVector(0);
    gain.D = 3.0;
    gain.domain = Domain::discrete;
    gain.sample_time = 1.0;
    const std::vector<cplx> y = simulate_discrete(gain, {cplx(1.0, 0.0), cplx(0.0, 2.0)});
    CHECK(y[0] == cplx(3.0, 0.0));
    CHECK(y[1] == cplx(0.0, 6.0));
}
