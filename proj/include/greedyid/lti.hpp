#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "greedyid/errors.hpp"

namespace greedyid {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

enum class Domain { continuous, discrete };

/// SISO descriptor model  E x' = A x + B u,  y = C x + D u, where x' is the
/// derivative (continuous) or the next sample (discrete). Matrices are kept
/// in complex storage even for real systems; `real` is true iff every stored
/// imaginary part is exactly zero. Order 0 means a pure feed-through.
struct StateSpace {
    Matrix E;
    Matrix A;
    Vector B;
    RowVector C;
    cplx D{0.0, 0.0};
    Domain domain{Domain::continuous};
    double sample_time{0.0};
    bool real{false};

    Eigen::Index order() const { return A.rows(); }

    /// Throws DimensionMismatch unless E, A are n x n and B, C have length n,
    /// and ConfigError for a discrete model without a positive sample time.
    void validate() const;

    /// Largest |imaginary part| over E, A, B, C, D.
    double max_imag() const;

    /// Sets `real` from an exact zero test of all imaginary parts.
    void refresh_real_flag();
};

/// Strictly increasing frequency samples in rad/s. Candidate evaluation
/// points are s = j*omega for continuous models and z = exp(j*omega*Ts)
/// for discrete ones.
struct FrequencyGrid {
    std::vector<double> omega;

    /// count log-equidistant frequencies on [wmin, wmax], endpoints included.
    /// Throws GridTooSmall for count < 2 or an empty/invalid range.
    static FrequencyGrid log_spaced(double wmin, double wmax, int count);

    std::size_t size() const { return omega.size(); }
    cplx point(std::size_t i) const { return cplx(0.0, omega[i]); }
    void validate() const;
};

/// Maps a frequency to the unit-circle evaluation point exp(j*omega*Ts).
/// Throws AboveNyquist for omega >= pi/Ts and ConfigError for Ts <= 0.
cplx to_unit_circle(double omega, double sample_time);

/// Evaluation point for `omega` according to the model domain.
cplx eval_point(const StateSpace& m, double omega);

/// H(s) = C (sE - A)^{-1} B + D via LU with partial pivoting. Throws
/// SingularPencil when the reciprocal condition estimate drops below 1e-14.
cplx eval_tf(const StateSpace& m, cplx s);

/// Repeated-evaluation form of eval_tf. Construction reduces (A, E) once to
/// Hessenberg/triangular form with unitary equivalence transforms, so every
/// call costs O(n^2) instead of an O(n^3) factorization. Real models are
/// reduced in real arithmetic. Calls are safe from concurrent threads.
class TfEvaluator {
  public:
    explicit TfEvaluator(const StateSpace& m);

    cplx operator()(cplx s) const;
    Eigen::Index order() const { return n_; }

  private:
    Eigen::Index n_{0};
    cplx d_{0.0, 0.0};
    Matrix h_;      // upper Hessenberg  Q^H A Z
    Matrix t_;      // upper triangular  Q^H E Z
    Vector b_;      // Q^H B
    RowVector c_;   // C Z
    double scale_h_{0.0};
    double scale_t_{0.0};
};

/// y_p = C x_p + D u_p with E x_{p+1} = A x_p + B u_p and x_0 = 0.
/// Discrete models only (ConfigError otherwise); E must be well conditioned
/// (SingularE when its reciprocal condition estimate is below 1e-14).
std::vector<cplx> simulate_discrete(const StateSpace& m, const std::vector<cplx>& u);

}  // namespace greedyid
