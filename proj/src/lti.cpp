#include "greedyid/lti.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Jacobi>
#include <Eigen/QR>

namespace greedyid {

void StateSpace::validate() const {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || E.rows() != n || E.cols() != n)
        throw DimensionMismatch("state-space: E and A must be square with equal order");
    if (B.size() != n || C.size() != n)
        throw DimensionMismatch("state-space: B and C must have length equal to the order");
    if (domain == Domain::discrete && !(sample_time > 0.0))
        throw ConfigError("state-space: discrete model requires a positive sample time");
}

double StateSpace::max_imag() const {
    double m = std::abs(D.imag());
    if (E.size() > 0) m = std::max(m, E.imag().cwiseAbs().maxCoeff());
    if (A.size() > 0) m = std::max(m, A.imag().cwiseAbs().maxCoeff());
    if (B.size() > 0) m = std::max(m, B.imag().cwiseAbs().maxCoeff());
    if (C.size() > 0) m = std::max(m, C.imag().cwiseAbs().maxCoeff());
    return m;
}

void StateSpace::refresh_real_flag() { real = (max_imag() == 0.0); }

FrequencyGrid FrequencyGrid::log_spaced(double wmin, double wmax, int count) {
    if (count < 2) throw GridTooSmall("frequency grid needs at least 2 points");
    if (!(wmin > 0.0) || !(wmax > wmin))
        throw GridTooSmall("frequency grid requires 0 < wmin < wmax");
    FrequencyGrid g;
    g.omega.resize(static_cast<std::size_t>(count));
    const double l0 = std::log10(wmin);
    const double l1 = std::log10(wmax);
    for (int i = 0; i < count; ++i)
        g.omega[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
    g.omega.front() = wmin;
    g.omega.back() = wmax;
    return g;
}

void FrequencyGrid::validate() const {
    if (omega.size() < 2) throw GridTooSmall("frequency grid needs at least 2 points");
    if (!(omega.front() > 0.0)) throw GridTooSmall("frequencies must be positive");
    for (std::size_t i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1]))
            throw GridTooSmall("frequencies must be strictly increasing");
}

cplx to_unit_circle(double omega, double sample_time) {
    if (!(sample_time > 0.0)) throw ConfigError("unit-circle map requires a positive sample time");
    const double theta = omega * sample_time;
    if (!(theta < M_PI))
        throw AboveNyquist("frequency at or above the Nyquist limit pi/Ts");
    return cplx(std::cos(theta), std::sin(theta));
}

cplx eval_point(const StateSpace& m, double omega) {
    return m.domain == Domain::continuous ? cplx(0.0, omega)
                                          : to_unit_circle(omega, m.sample_time);
}

cplx eval_tf(const StateSpace& m, cplx s) {
    m.validate();
    if (m.order() == 0) return m.D;
    Matrix pencil = s * m.E - m.A;
    Eigen::PartialPivLU<Matrix> lu(pencil);
    if (lu.rcond() < 1e-14)
        throw SingularPencil("transfer-function pencil sE - A is numerically singular");
    Vector x = lu.solve(m.B);
    return (m.C * x)(0) + m.D;
}

namespace {

// Hessenberg/triangular reduction of the pencil (A, E): unitary Q, Z with
// Q^H A Z upper Hessenberg and Q^H E Z upper triangular. Q and Z are not
// accumulated; they are applied directly to b and c. Scalar is double or
// cplx so real models stay in real arithmetic.
template <typename Scalar>
struct ReducedPencil {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, e;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b;
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> c;
};

template <typename Scalar>
ReducedPencil<Scalar> hessenberg_triangular(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> e,
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b,
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> c) {
    const Eigen::Index n = a.rows();
    if (!e.isIdentity(0.0)) {
        Eigen::HouseholderQR<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> qr(e);
        a = qr.householderQ().adjoint() * a;
        b = qr.householderQ().adjoint() * b;
        e = qr.matrixQR().template triangularView<Eigen::Upper>();
    }
    Eigen::JacobiRotation<Scalar> rot;
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
        for (Eigen::Index i = n - 1; i >= j + 2; --i) {
            // Row rotation annihilating a(i, j); fills e(i, i-1).
            rot.makeGivens(a(i - 1, j), a(i, j));
            a.applyOnTheLeft(i - 1, i, rot.adjoint());
            e.applyOnTheLeft(i - 1, i, rot.adjoint());
            b.applyOnTheLeft(i - 1, i, rot.adjoint());
            a(i, j) = Scalar(0);
            // Column rotation restoring the triangular e. makeGivens zeroes
            // s*p + c*q, but a right-multiplication zeroes s*conj(p) +
            // c*conj(q), so the arguments are conjugated.
            rot.makeGivens(Eigen::numext::conj(e(i, i)), Eigen::numext::conj(e(i, i - 1)));
            e.applyOnTheRight(i, i - 1, rot);
            a.applyOnTheRight(i, i - 1, rot);
            c.applyOnTheRight(i, i - 1, rot);
            e(i, i - 1) = Scalar(0);
        }
    }
    return {std::move(a), std::move(e), std::move(b), std::move(c)};
}

}  // namespace

TfEvaluator::TfEvaluator(const StateSpace& m) {
    m.validate();
    n_ = m.order();
    d_ = m.D;
    if (n_ == 0) return;
    if (m.real) {
        auto red = hessenberg_triangular<double>(m.A.real(), m.E.real(), m.B.real(), m.C.real());
        h_ = red.a.cast<cplx>();
        t_ = red.e.cast<cplx>();
        b_ = red.b.cast<cplx>();
        c_ = red.c.cast<cplx>();
    } else {
        auto red = hessenberg_triangular<cplx>(m.A, m.E, m.B, m.C);
        h_ = std::move(red.a);
        t_ = std::move(red.e);
        b_ = std::move(red.b);
        c_ = std::move(red.c);
    }
    scale_h_ = h_.cwiseAbs().maxCoeff();
    scale_t_ = t_.cwiseAbs().maxCoeff();
}

cplx TfEvaluator::operator()(cplx s) const {
    if (n_ == 0) return d_;
    const Eigen::Index n = n_;
    static thread_local Matrix work;
    static thread_local Vector x;
    work = s * t_ - h_;  // upper Hessenberg
    x = b_;
    const double scale = std::abs(s) * scale_t_ + scale_h_;
    const double floor = scale * 1e-16 + std::numeric_limits<double>::min();
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (std::abs(work(k + 1, k)) > std::abs(work(k, k))) {
            work.row(k).segment(k, n - k).swap(work.row(k + 1).segment(k, n - k));
            std::swap(x(k), x(k + 1));
        }
        const cplx piv = work(k, k);
        if (std::abs(piv) <= floor)
            throw SingularPencil("transfer-function pencil sE - A is numerically singular");
        const cplx f = work(k + 1, k) / piv;
        if (f != cplx(0.0, 0.0)) {
            work.row(k + 1).segment(k + 1, n - k - 1) -= f * work.row(k).segment(k + 1, n - k - 1);
            x(k + 1) -= f * x(k);
        }
        work(k + 1, k) = cplx(0.0, 0.0);
    }
    if (std::abs(work(n - 1, n - 1)) <= floor)
        throw SingularPencil("transfer-function pencil sE - A is numerically singular");
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        cplx acc = x(k);
        if (k + 1 < n)
            acc -= (work.row(k).segment(k + 1, n - k - 1) * x.segment(k + 1, n - k - 1))(0);
        x(k) = acc / work(k, k);
    }
    return (c_ * x)(0) + d_;
}

std::vector<cplx> simulate_discrete(const StateSpace& m, const std::vector<cplx>& u) {
    m.validate();
    if (m.domain != Domain::discrete)
        throw ConfigError("simulate_discrete requires a discrete-domain model");
    std::vector<cplx> y(u.size());
    if (m.order() == 0) {
        for (std::size_t p = 0; p < u.size(); ++p) y[p] = m.D * u[p];
        return y;
    }
    Eigen::PartialPivLU<Matrix> lu(m.E);
    if (lu.rcond() < 1e-14)
        throw SingularE("simulate_discrete: E is numerically singular");
    Vector x = Vector::Zero(m.order());
    for (std::size_t p = 0; p < u.size(); ++p) {
        y[p] = (m.C * x)(0) + m.D * u[p];
        x = lu.solve((m.A * x + m.B * u[p]).eval());
    }
    return y;
}

}  // namespace greedyid
